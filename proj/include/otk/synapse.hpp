#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "otk/errors.hpp"

namespace otk::synapse {

// Threshold-gated synaptogenesis: a synapse between two nodes is created and
// reinforced only while the superposed pulse amplitude of the pair inside the
// synchrony window exceeds growth_threshold; conductance then follows the
// self-limiting logistic dG/dt = s_curve_rate*G*(1 - G/g_max).
struct GrowthRule {
    double growth_threshold = 4.0;   // V
    double synchrony_window = 2e-3;  // s
    double s_curve_rate = 20.0;      // 1/s
    double g_max = 1e-3;             // S
    double g_seed = 1e-8;            // conductance at creation (S)
    double rate_jitter = 0.0;        // optional relative spread of s_curve_rate, default off
    std::uint64_t jitter_seed = 0;

    void validate() const;
};

// Retention rates are interpolated between the weakly and the strongly
// reinforced anchor: ~50% loss over 48 h at reinforcement 0, <2% at 1.
struct DecayRule {
    double weak_rate = 4.0115087181918775e-6;    // ln(2)/48h (1/s)
    double strong_rate = 5.8157394818682627e-8;  // ln(1/0.99)/48h (1/s)

    void validate() const;
};

struct PlasticityWindows {
    // Pair-timing (STDP) double exponential: potentiation for pre-before-post.
    double stdp_pot_amplitude = 0.8;
    double stdp_pot_tau = 20e-3;  // s
    double stdp_dep_amplitude = 0.5;
    double stdp_dep_tau = 40e-3;  // s
    // Paired-pulse (short-term) depression: none up to std_floor, deepening
    // with pulse displacement beyond it.
    double std_floor = 1e-3;      // s
    double std_amplitude = 0.8;   // in [0, 1]
    double std_tau = 1.0;         // s

    void validate() const;
};

struct SynapseState {
    double conductance = 0.0;    // S
    double reinforcement = 1.0;  // in [0, 1]
    bool exists = false;
};

struct NodePulse {
    double time = 0.0;       // s, within the current step window
    double amplitude = 0.0;  // V
};

// Per-node pulse trains over one growth step.
using NodeSignals = std::vector<std::vector<NodePulse>>;

struct SynapticNetwork {
    int n_nodes = 0;
    GrowthRule rule;
    std::map<std::pair<int, int>, SynapseState> synapses;  // key (min, max)

    [[nodiscard]] bool exists(int a, int b) const;
    [[nodiscard]] double conductance(int a, int b) const;  // 0 for absent synapses
    void insert(int a, int b, SynapseState state);
};

// Advances every node pair by dt: pairs whose superposed in-window amplitude
// exceeds the threshold are created (at g_seed) and grown along the logistic.
void growth_step(SynapticNetwork& net, const NodeSignals& signals, double dt);

/// Closed-form logistic conductance at time t after creation from g_seed.
[[nodiscard]] double conductance_curve(double t, const GrowthRule& rule);

[[nodiscard]] double decay_rate(double reinforcement, const DecayRule& rule);

/// Exponential conductance decay at the reinforcement-dependent rate.
[[nodiscard]] SynapseState long_term_decay(const SynapseState& s, double elapsed,
                                           const DecayRule& rule);

// Relative weight change for a pre/post spike-time difference delta_t
// (positive when pre fires first): potentiation peaks just above zero,
// acausal order gives depression.
[[nodiscard]] double stdp_update(double delta_t, const PlasticityWindows& windows);

// Second-pulse response ratio: exactly 1 up to the 1 ms floor, then
// monotonically deepening depression with pulse displacement.
[[nodiscard]] double paired_pulse_ratio(double delta_t, const PlasticityWindows& windows);

/// True when a path of existing synapses connects the two nodes.
[[nodiscard]] bool connected(const SynapticNetwork& net, int from, int to);

struct PavlovResult {
    bool initial_link = false;        // bell-salivation connectivity before training
    bool link_after_async = false;    // after de-synchronized bell+food
    bool link_after_sync = false;     // after synchronous bell+food
    bool bell_triggers_output = false;  // bell alone activates salivation afterwards
};

// Scripted four-phase conditioning: bell and food fire 3 V / 50 Hz trains,
// first displaced by half a period, then synchronously; food-salivation is
// pre-wired as the unconditioned reflex.
[[nodiscard]] PavlovResult run_pavlov_protocol(const GrowthRule& rule);

using Bitmap = std::array<bool, 15>;

// Accepts a 15-char 01 string or a 3x5 grid with line breaks.
[[nodiscard]] Bitmap parse_bitmap(const std::string& text);

struct DigitReadoutParams {
    GrowthRule growth;
    PlasticityWindows windows;
    double train_pulse_v = 5.0;  // black pixel amplitude
    double void_pulse_v = 2.0;   // white pixel amplitude (below threshold)
    double train_time = 2.0;     // s of supra-threshold growth per black pixel
    double false_pixel_displacement = 0.1;  // s; sets the per-false-pixel depression
};

// Grows one synapse per black training pixel, then reads the query pattern:
// overlap pixels conduct, each spurious query pixel applies one paired-pulse
// depression factor. Returns the integrated current normalized to the
// trained-pattern reading.
[[nodiscard]] double train_and_read_digits(const Bitmap& pattern_train,
                                           const Bitmap& pattern_query,
                                           const DigitReadoutParams& params = {});

}  // namespace otk::synapse
