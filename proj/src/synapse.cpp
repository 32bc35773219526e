#include "otk/synapse.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace otk::synapse {

void GrowthRule::validate() const {
    if (!(growth_threshold > 0.0)) throw DomainError("growth: threshold must be > 0");
    if (!(synchrony_window > 0.0)) throw DomainError("growth: synchrony_window must be > 0");
    if (!(s_curve_rate > 0.0)) throw DomainError("growth: s_curve_rate must be > 0");
    if (!(g_max > 0.0)) throw DomainError("growth: g_max must be > 0");
    if (!(g_seed > 0.0 && g_seed < g_max)) throw DomainError("growth: need 0 < g_seed < g_max");
    if (rate_jitter < 0.0 || rate_jitter >= 1.0) throw DomainError("growth: rate_jitter must be in [0,1)");
}

void DecayRule::validate() const {
    if (weak_rate < 0.0 || strong_rate < 0.0) throw DomainError("decay: rates must be >= 0");
    if (strong_rate > weak_rate) throw DomainError("decay: strong_rate must not exceed weak_rate");
}

void PlasticityWindows::validate() const {
    if (!(stdp_pot_tau > 0.0) || !(stdp_dep_tau > 0.0) || !(std_tau > 0.0)) {
        throw DomainError("plasticity: time constants must be > 0");
    }
    if (stdp_pot_amplitude < 0.0 || stdp_dep_amplitude < 0.0) {
        throw DomainError("plasticity: STDP amplitudes must be >= 0");
    }
    if (!(std_amplitude >= 0.0 && std_amplitude <= 1.0)) {
        throw DomainError("plasticity: std_amplitude must be in [0,1]");
    }
    if (std_floor < 0.0) throw DomainError("plasticity: std_floor must be >= 0");
}

bool SynapticNetwork::exists(int a, int b) const {
    const auto it = synapses.find(std::minmax(a, b));
    return it != synapses.end() && it->second.exists;
}

double SynapticNetwork::conductance(int a, int b) const {
    const auto it = synapses.find(std::minmax(a, b));
    return it != synapses.end() && it->second.exists ? it->second.conductance : 0.0;
}

void SynapticNetwork::insert(int a, int b, SynapseState state) {
    synapses[std::minmax(a, b)] = state;
}

namespace {

// Advance the logistic dG/dt = r*G*(1 - G/g_max) by dt in closed form.
double logistic_advance(double g, double r, double g_max, double dt) {
    const double e = std::exp(r * dt);
    return g_max * g * e / (g_max + g * (e - 1.0));
}

// Largest pair amplitude reachable within the synchrony window: each pulse of
// one node is superposed with the best coincident pulse of the other.
double superposed_amplitude(const std::vector<NodePulse>& a, const std::vector<NodePulse>& b,
                            double window) {
    double best = 0.0;
    for (const NodePulse& p : a) best = std::max(best, std::abs(p.amplitude));
    for (const NodePulse& q : b) best = std::max(best, std::abs(q.amplitude));
    for (const NodePulse& p : a) {
        for (const NodePulse& q : b) {
            if (std::abs(p.time - q.time) <= window) {
                best = std::max(best, std::abs(p.amplitude) + std::abs(q.amplitude));
            }
        }
    }
    return best;
}

std::uint64_t mix_hash(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xFF51AFD7ED558CCDull;
    x ^= x >> 33;
    x *= 0xC4CEB9FE1A85EC53ull;
    x ^= x >> 33;
    return x;
}

double jittered_rate(const GrowthRule& rule, int a, int b) {
    if (rule.rate_jitter == 0.0) return rule.s_curve_rate;
    const std::uint64_t key =
        mix_hash(rule.jitter_seed ^ (static_cast<std::uint64_t>(a) << 32 | static_cast<std::uint32_t>(b)));
    const double u = 2.0 * (static_cast<double>(key >> 11) * 0x1.0p-53) - 1.0;  // [-1, 1)
    return rule.s_curve_rate * (1.0 + rule.rate_jitter * u);
}

}  // namespace

void growth_step(SynapticNetwork& net, const NodeSignals& signals, double dt) {
    if (!(dt > 0.0)) throw DomainError("growth_step: dt must be > 0");
    if (static_cast<int>(signals.size()) != net.n_nodes) {
        throw DomainError("growth_step: one signal train per node required");
    }
    net.rule.validate();

    for (int a = 0; a < net.n_nodes; ++a) {
        for (int b = a + 1; b < net.n_nodes; ++b) {
            const double amp =
                superposed_amplitude(signals[a], signals[b], net.rule.synchrony_window);
            if (amp <= net.rule.growth_threshold) continue;

            auto& s = net.synapses[{a, b}];
            if (!s.exists) {
                s.exists = true;
                s.conductance = net.rule.g_seed;
                s.reinforcement = 1.0;
            }
            s.conductance =
                logistic_advance(s.conductance, jittered_rate(net.rule, a, b), net.rule.g_max, dt);
        }
    }
}

double conductance_curve(double t, const GrowthRule& rule) {
    if (t < 0.0) throw DomainError("conductance_curve: t must be >= 0");
    rule.validate();
    return logistic_advance(rule.g_seed, rule.s_curve_rate, rule.g_max, t);
}

double decay_rate(double reinforcement, const DecayRule& rule) {
    rule.validate();
    const double rho = std::clamp(reinforcement, 0.0, 1.0);
    return (1.0 - rho) * rule.weak_rate + rho * rule.strong_rate;
}

SynapseState long_term_decay(const SynapseState& s, double elapsed, const DecayRule& rule) {
    if (elapsed < 0.0) throw DomainError("long_term_decay: elapsed must be >= 0");
    SynapseState out = s;
    out.conductance = s.conductance * std::exp(-decay_rate(s.reinforcement, rule) * elapsed);
    return out;
}

double stdp_update(double delta_t, const PlasticityWindows& windows) {
    windows.validate();
    if (delta_t >= 0.0) {
        return windows.stdp_pot_amplitude * std::exp(-delta_t / windows.stdp_pot_tau);
    }
    return -windows.stdp_dep_amplitude * std::exp(delta_t / windows.stdp_dep_tau);
}

double paired_pulse_ratio(double delta_t, const PlasticityWindows& windows) {
    if (!(delta_t > 0.0)) throw DomainError("paired_pulse_ratio: delta_t must be > 0");
    windows.validate();
    if (delta_t <= windows.std_floor) return 1.0;
    return 1.0 - windows.std_amplitude *
                     (1.0 - std::exp(-(delta_t - windows.std_floor) / windows.std_tau));
}

bool connected(const SynapticNetwork& net, int from, int to) {
    if (from == to) return true;
    std::vector<char> seen(net.n_nodes, 0);
    std::queue<int> queue;
    queue.push(from);
    seen[from] = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop();
        for (int w = 0; w < net.n_nodes; ++w) {
            if (!seen[w] && net.exists(v, w)) {
                if (w == to) return true;
                seen[w] = 1;
                queue.push(w);
            }
        }
    }
    return false;
}

PavlovResult run_pavlov_protocol(const GrowthRule& rule) {
    rule.validate();
    constexpr int kBell = 0, kFood = 1, kSaliva = 2;

    SynapticNetwork net;
    net.n_nodes = 3;
    net.rule = rule;

    // Unconditioned reflex: food already drives salivation.
    SynapseState reflex;
    reflex.exists = true;
    reflex.conductance = rule.g_max;
    net.insert(kFood, kSaliva, reflex);

    PavlovResult result;
    result.initial_link = connected(net, kBell, kSaliva);

    // 50 Hz trains of 3 V pulses for 1 s. Asynchronous phase: food displaced
    // by half a period, far outside the synchrony window.
    const double period = 0.02;
    const double amplitude = 3.0;
    const int n_pulses = 50;
    auto run_phase = [&](double food_offset) {
        for (int k = 0; k < n_pulses; ++k) {
            NodeSignals signals(3);
            signals[kBell].push_back({0.0, amplitude});
            signals[kFood].push_back({food_offset, amplitude});
            growth_step(net, signals, period);
        }
    };

    run_phase(period / 2.0);
    result.link_after_async = connected(net, kBell, kSaliva);

    run_phase(0.0);
    result.link_after_sync = connected(net, kBell, kSaliva);

    // Conditioned response: a bell pulse alone must now reach the output.
    result.bell_triggers_output =
        connected(net, kBell, kSaliva) && net.conductance(kBell, kFood) > 0.0;
    return result;
}

Bitmap parse_bitmap(const std::string& text) {
    Bitmap bits{};
    std::size_t k = 0;
    for (char c : text) {
        if (c == '0' || c == '1') {
            if (k >= bits.size()) throw DomainError("parse_bitmap: more than 15 pixels");
            bits[k++] = c == '1';
        } else if (c != '\n' && c != '\r' && c != ' ' && c != '\t') {
            throw DomainError(std::string("parse_bitmap: unexpected character '") + c + "'");
        }
    }
    if (k != bits.size()) throw DomainError("parse_bitmap: expected 15 pixels");
    return bits;
}

double train_and_read_digits(const Bitmap& pattern_train, const Bitmap& pattern_query,
                             const DigitReadoutParams& params) {
    params.growth.validate();
    params.windows.validate();
    if (!(params.train_pulse_v > params.growth.growth_threshold)) {
        throw DomainError("digits: train_pulse_v must exceed the growth threshold");
    }
    if (!(params.void_pulse_v < params.growth.growth_threshold)) {
        throw DomainError("digits: void_pulse_v must stay below the growth threshold");
    }

    // Training: pixel electrodes fire against the common readout line; only
    // black pixels clear the threshold, so only they grow a synapse.
    std::array<double, 15> g{};
    double g_total = 0.0;
    for (int i = 0; i < 15; ++i) {
        if (pattern_train[i]) {
            g[i] = conductance_curve(params.train_time, params.growth);
            g_total += g[i];
        }
    }
    if (g_total <= 0.0) return 0.0;  // empty pattern trains nothing

    // Readout: overlap pixels conduct; every spurious query pixel de-dopes the
    // line and contributes one paired-pulse depression factor.
    const double depression =
        paired_pulse_ratio(params.false_pixel_displacement, params.windows);
    double current = 0.0;
    int false_pixels = 0;
    for (int i = 0; i < 15; ++i) {
        if (pattern_train[i] && pattern_query[i]) current += g[i];
        if (!pattern_train[i] && pattern_query[i]) ++false_pixels;
    }
    return current / g_total * std::pow(depression, false_pixels);
}

}  // namespace otk::synapse
