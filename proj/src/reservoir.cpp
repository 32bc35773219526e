#include "otk/reservoir.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "otk/constants.hpp"

namespace otk::reservoir {

namespace {

// splitmix64: tiny, well-mixed, and identical on every platform, which keeps
// masks and data splits byte-reproducible across toolchains.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double interp_at(const Trajectory& traj, double t) {
    if (traj.y.empty()) return 0.0;
    const double pos = t / traj.step;
    const auto k = static_cast<long>(std::floor(pos));
    if (k < 0) return traj.y.front();
    if (k + 1 >= static_cast<long>(traj.y.size())) return traj.y.back();
    const double alpha = pos - static_cast<double>(k);
    return (1.0 - alpha) * traj.y[k] + alpha * traj.y[k + 1];
}

}  // namespace

void DelayFeedbackConfig::validate() const {
    if (!(tau > 0.0)) throw DomainError("reservoir: tau must be > 0");
    if (!(step > 0.0)) throw DomainError("reservoir: step must be > 0");
    if (step > tau / 50.0 * (1.0 + 1e-12)) {
        throw DomainError("reservoir: step must be <= tau/50");
    }
    if (tau_nl < 0.0) throw DomainError("reservoir: tau_nl must be >= 0");
    if (!(divergence_bound > 0.0)) throw DomainError("reservoir: divergence_bound must be > 0");
    if (!nonlinearity) throw ConfigError("reservoir: nonlinearity is not set");
}

Trajectory integrate_delay_system(const DelayFeedbackConfig& cfg, const InputFn& input,
                                  double horizon) {
    cfg.validate();
    if (!(horizon > 0.0)) throw DomainError("integrate_delay_system: horizon must be > 0");

    const double h = cfg.step;
    const long n_steps = static_cast<long>(std::ceil(horizon / h - 1e-9));
    const double delay_pos = cfg.tau / h;  // delayed index offset, possibly fractional
    const long d = static_cast<long>(std::floor(delay_pos));
    const double frac = delay_pos - static_cast<double>(d);

    auto history_at = [&](double t) { return cfg.history ? cfg.history(t) : 0.0; };

    Trajectory traj;
    traj.step = h;
    traj.t.resize(n_steps + 1);
    traj.y.resize(n_steps + 1);
    traj.y[0] = history_at(0.0);
    traj.t[0] = 0.0;

    // y(t_k - tau) sits between grid indices k-d-1 and k-d; indices below zero
    // are served by the history function.
    auto value_at_index = [&](long idx) {
        if (idx < 0) return history_at(static_cast<double>(idx) * h);
        return traj.y[idx];
    };

    const double decay = cfg.tau_nl > 0.0 ? std::exp(-h / cfg.tau_nl) : 0.0;
    for (long k = 0; k < n_steps; ++k) {
        const double t_k = static_cast<double>(k) * h;
        const double delayed =
            (1.0 - frac) * value_at_index(k - d) + frac * value_at_index(k - d - 1);
        const double target = cfg.gain * cfg.nonlinearity(delayed, input ? input(t_k) : 0.0);
        const double y_next = cfg.tau_nl > 0.0
                                  ? decay * traj.y[k] + (1.0 - decay) * target
                                  : target;
        if (!std::isfinite(y_next) || std::abs(y_next) > cfg.divergence_bound) {
            throw NumericError("integrate_delay_system: trajectory diverged at t = " +
                               std::to_string(t_k));
        }
        traj.y[k + 1] = y_next;
        traj.t[k + 1] = static_cast<double>(k + 1) * h;
    }
    return traj;
}

Nonlinearity logistic_nonlinearity() {
    return [](double feedback, double input) {
        const double u = feedback + input;
        return u * (1.0 - u);
    };
}

std::vector<double> iterate_adiabatic_map(const DelayFeedbackConfig& cfg,
                                          const std::vector<double>& inputs, int n, double y0) {
    if (n < 1) throw DomainError("iterate_adiabatic_map: n must be >= 1");
    if (!cfg.nonlinearity) throw ConfigError("iterate_adiabatic_map: nonlinearity is not set");
    std::vector<double> out(n);
    double y = y0;
    for (int k = 0; k < n; ++k) {
        const double x = inputs.empty() ? 0.0 : inputs[k % inputs.size()];
        y = cfg.gain * cfg.nonlinearity(y, x);
        out[k] = y;
    }
    return out;
}

ScalarMap logistic_map() {
    return [](double param, double y) { return param * y * (1.0 - y); };
}

BifurcationDiagram bifurcation_diagram(const ScalarMap& map, double param_lo, double param_hi,
                                       int n_params, int n_transient, int n_sample, double y0) {
    if (n_transient < 1 || n_sample < 1) {
        throw DomainError("bifurcation_diagram: n_transient and n_sample must be >= 1");
    }
    if (n_params < 1) throw DomainError("bifurcation_diagram: n_params must be >= 1");

    BifurcationDiagram diagram;
    diagram.params.resize(n_params);
    diagram.samples.resize(n_params);
    for (int i = 0; i < n_params; ++i) {
        const double p = n_params == 1
                             ? param_lo
                             : param_lo + (param_hi - param_lo) * i / (n_params - 1.0);
        diagram.params[i] = p;
        double y = y0;
        for (int k = 0; k < n_transient; ++k) y = map(p, y);
        auto& bucket = diagram.samples[i];
        bucket.resize(n_sample);
        for (int k = 0; k < n_sample; ++k) {
            y = map(p, y);
            bucket[k] = y;
        }
    }
    return diagram;
}

BifurcationDiagram bifurcation_from_system(DelayFeedbackConfig cfg,
                                           const std::vector<double>& gains, int n_transient,
                                           int n_sample) {
    if (n_transient < 1 || n_sample < 1) {
        throw DomainError("bifurcation_from_system: n_transient and n_sample must be >= 1");
    }
    BifurcationDiagram diagram;
    diagram.params = gains;
    diagram.samples.resize(gains.size());
    const double horizon = (n_transient + n_sample + 1) * cfg.tau;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        cfg.gain = gains[i];
        const Trajectory traj = integrate_delay_system(cfg, nullptr, horizon);
        auto& bucket = diagram.samples[i];
        bucket.resize(n_sample);
        for (int k = 0; k < n_sample; ++k) {
            bucket[k] = interp_at(traj, (n_transient + 1 + k) * cfg.tau);
        }
    }
    return diagram;
}

namespace {

bool is_period_two(const ScalarMap& map, double param, double y0, long n_iter,
                   double amplitude_threshold) {
    double y = y0;
    for (long k = 0; k < n_iter; ++k) y = map(param, y);
    double amp = 0.0;
    double prev = y;
    for (int k = 0; k < 16; ++k) {
        y = map(param, y);
        amp = std::max(amp, std::abs(y - prev));
        prev = y;
    }
    return amp > amplitude_threshold;
}

}  // namespace

double locate_first_period_doubling(const ScalarMap& map, double param_lo, double param_hi,
                                    double y0, long n_iter, double amplitude_threshold) {
    if (!(param_lo < param_hi)) {
        throw DomainError("locate_first_period_doubling: need param_lo < param_hi");
    }
    if (is_period_two(map, param_lo, y0, n_iter, amplitude_threshold) ||
        !is_period_two(map, param_hi, y0, n_iter, amplitude_threshold)) {
        throw DomainError("locate_first_period_doubling: endpoints do not bracket the doubling");
    }
    double lo = param_lo, hi = param_hi;
    for (int k = 0; k < 64 && hi - lo > 1e-9; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (is_period_two(map, mid, y0, n_iter, amplitude_threshold)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

PhasePortrait phase_portrait(const Trajectory& traj, double tau, double transient_time) {
    if (traj.y.size() < 2) throw DomainError("phase_portrait: empty trajectory");
    if (!(tau > 0.0)) throw DomainError("phase_portrait: tau must be > 0");
    const double span = traj.t.back();
    if (span < tau + transient_time) {
        throw DomainError("phase_portrait: trajectory shorter than transient + tau");
    }
    PhasePortrait portrait;
    const double t_start = transient_time + tau;
    const auto k_start = static_cast<std::size_t>(std::ceil(t_start / traj.step - 1e-9));
    portrait.points.reserve(traj.y.size() - k_start);
    for (std::size_t k = k_start; k < traj.y.size(); ++k) {
        const double t = traj.t[k];
        portrait.points.push_back({traj.y[k], interp_at(traj, t - tau)});
    }
    return portrait;
}

BoxCountResult box_counting_dimension(const std::vector<std::array<double, 2>>& points,
                                      double scale_min, double scale_max, int n_scales) {
    if (points.size() < 1000) {
        throw DomainError("box_counting_dimension: need at least 1000 points");
    }
    if (!(scale_min > 0.0 && scale_min < scale_max && scale_max <= 1.0)) {
        throw DomainError("box_counting_dimension: need 0 < scale_min < scale_max <= 1");
    }
    if (n_scales < 2) throw DomainError("box_counting_dimension: need n_scales >= 2");

    double x_lo = points[0][0], x_hi = x_lo, y_lo = points[0][1], y_hi = y_lo;
    for (const auto& q : points) {
        x_lo = std::min(x_lo, q[0]);
        x_hi = std::max(x_hi, q[0]);
        y_lo = std::min(y_lo, q[1]);
        y_hi = std::max(y_hi, q[1]);
    }
    // One isotropic extent for both axes; per-axis scaling would distort the
    // measured dimension.
    const double extent = std::max(x_hi - x_lo, y_hi - y_lo);

    BoxCountResult out;
    if (extent <= 0.0) {
        out.dimension = 0.0;
        out.resolution_warning = true;
        return out;
    }

    out.scales.resize(n_scales);
    out.counts.resize(n_scales);
    for (int s = 0; s < n_scales; ++s) {
        const double frac =
            scale_max * std::pow(scale_min / scale_max, s / (n_scales - 1.0));
        const double cell = frac * extent;
        const auto n_cells = static_cast<long>(std::ceil(1.0 / frac));
        std::unordered_set<std::uint64_t> occupied;
        occupied.reserve(points.size());
        for (const auto& q : points) {
            auto ix = static_cast<long>(std::floor((q[0] - x_lo) / cell));
            auto iy = static_cast<long>(std::floor((q[1] - y_lo) / cell));
            ix = std::clamp(ix, 0L, n_cells - 1);
            iy = std::clamp(iy, 0L, n_cells - 1);
            occupied.insert((static_cast<std::uint64_t>(ix) << 32) |
                            static_cast<std::uint32_t>(iy));
        }
        out.scales[s] = frac;
        out.counts[s] = occupied.size();
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int s = 0; s < n_scales; ++s) {
        const double lx = std::log(1.0 / out.scales[s]);
        const double ly = std::log(static_cast<double>(out.counts[s]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = n_scales;
    out.dimension = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.resolution_warning =
        out.counts.back() * 2 > points.size();  // smallest boxes nearly one point each
    return out;
}

void MaskSpec::validate(double tau) const {
    if (n_virtual_nodes < 1) throw ConfigError("mask: n_virtual_nodes must be >= 1");
    if (static_cast<int>(mask.size()) != n_virtual_nodes) {
        throw ConfigError("mask: length " + std::to_string(mask.size()) +
                          " does not match n_virtual_nodes " + std::to_string(n_virtual_nodes));
    }
    if (!(theta > 0.0)) throw ConfigError("mask: theta must be > 0");
    const double covered = theta * n_virtual_nodes;
    if (std::abs(covered - tau) > 1e-9 * tau) {
        throw ConfigError("mask: n_virtual_nodes*theta must equal tau");
    }
}

std::vector<double> rademacher_mask(int n, std::uint64_t seed) {
    std::vector<double> mask(n);
    std::uint64_t state = seed;
    for (int i = 0; i < n; ++i) {
        mask[i] = (splitmix64(state) & 1ull) ? 1.0 : -1.0;
    }
    return mask;
}

double PiecewiseConstantDrive::value_at(double t) const {
    if (values.empty()) return 0.0;
    const auto n = static_cast<long>(values.size());
    long j = static_cast<long>(std::floor(t / theta));
    j %= n;
    if (j < 0) j += n;
    return values[j];
}

PiecewiseConstantDrive mask_and_multiplex(const std::vector<double>& u, const MaskSpec& mask) {
    if (u.empty()) throw ConfigError("mask_and_multiplex: empty feature vector");
    if (static_cast<int>(mask.mask.size()) != mask.n_virtual_nodes) {
        throw ConfigError("mask_and_multiplex: mask length does not match n_virtual_nodes");
    }
    PiecewiseConstantDrive drive;
    drive.theta = mask.theta;
    drive.values.resize(mask.n_virtual_nodes);
    for (int j = 0; j < mask.n_virtual_nodes; ++j) {
        drive.values[j] = mask.mask[j] * u[j % u.size()];
    }
    return drive;
}

std::vector<double> ReadoutModel::scores(const std::vector<double>& state) const {
    if (static_cast<int>(state.size()) != n_inputs) {
        throw DomainError("readout: state length does not match model inputs");
    }
    std::vector<double> s(n_classes, 0.0);
    for (int c = 0; c < n_classes; ++c) {
        double acc = weights[static_cast<std::size_t>(n_inputs) * n_classes + c];  // bias row
        for (int j = 0; j < n_inputs; ++j) {
            acc += weights[static_cast<std::size_t>(j) * n_classes + c] * state[j];
        }
        s[c] = acc;
    }
    return s;
}

int ReadoutModel::predict(const std::vector<double>& state) const {
    const std::vector<double> s = scores(state);
    return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

ReadoutModel train_readout(const std::vector<std::vector<double>>& states,
                           const std::vector<std::vector<double>>& targets, double ridge) {
    if (states.empty() || states.size() != targets.size()) {
        throw DomainError("train_readout: states and targets must be non-empty and same length");
    }
    if (ridge < 0.0) throw DomainError("train_readout: ridge must be >= 0");
    const int rows = static_cast<int>(states.size());
    const int n_in = static_cast<int>(states[0].size());
    const int n_cls = static_cast<int>(targets[0].size());

    Eigen::MatrixXd x(rows, n_in + 1);
    Eigen::MatrixXd y(rows, n_cls);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(states[r].size()) != n_in ||
            static_cast<int>(targets[r].size()) != n_cls) {
            throw DomainError("train_readout: ragged states or targets");
        }
        for (int j = 0; j < n_in; ++j) x(r, j) = states[r][j];
        x(r, n_in) = 1.0;
        for (int c = 0; c < n_cls; ++c) y(r, c) = targets[r][c];
    }

    Eigen::MatrixXd w;
    if (ridge == 0.0) {
        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
        if (qr.rank() < n_in + 1) {
            throw NumericError("train_readout: rank-deficient states with ridge = 0");
        }
        w = qr.solve(y);
    } else {
        Eigen::MatrixXd a = x.transpose() * x;
        a.diagonal().array() += ridge;
        w = a.ldlt().solve(x.transpose() * y);
    }

    ReadoutModel model;
    model.n_inputs = n_in;
    model.n_classes = n_cls;
    model.ridge = ridge;
    model.weights.resize(static_cast<std::size_t>(n_in + 1) * n_cls);
    for (int j = 0; j <= n_in; ++j) {
        for (int c = 0; c < n_cls; ++c) {
            model.weights[static_cast<std::size_t>(j) * n_cls + c] = w(j, c);
        }
    }
    return model;
}

// ---------------------------------------------------------------------------
// Iris experiment
// ---------------------------------------------------------------------------

namespace {

int iris_label_from_token(const std::string& token) {
    if (token.find("setosa") != std::string::npos) return 0;
    if (token.find("versicolor") != std::string::npos) return 1;
    if (token.find("virginica") != std::string::npos) return 2;
    if (token == "0" || token == "1" || token == "2") return token[0] - '0';
    return -1;
}

}  // namespace

std::vector<IrisRecord> load_iris_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_iris_csv: cannot open '" + path + "'");

    std::vector<IrisRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 5) {
            throw IoError("load_iris_csv: line " + std::to_string(line_no) +
                          ": expected 5 columns");
        }
        IrisRecord rec;
        bool numeric = true;
        for (int j = 0; j < 4; ++j) {
            const char* first = cells[j].data();
            const char* last = first + cells[j].size();
            auto [ptr, ec] = std::from_chars(first, last, rec.features[j]);
            if (ec != std::errc() || ptr != last) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (line_no == 1) continue;  // header row
            throw IoError("load_iris_csv: line " + std::to_string(line_no) +
                          ": non-numeric feature");
        }
        rec.label = iris_label_from_token(cells[4]);
        if (rec.label < 0) {
            throw IoError("load_iris_csv: line " + std::to_string(line_no) +
                          ": unknown species '" + cells[4] + "'");
        }
        records.push_back(rec);
    }
    if (records.empty()) throw IoError("load_iris_csv: no records in '" + path + "'");
    return records;
}

double IrisEncoding::channel_value(int channel, double t) const {
    if (channel < 0 || channel > 3) throw DomainError("iris encoding: channel out of range");
    if (t < 0.0 || t >= duration) return 0.0;  // quiet outside the active segment
    return amplitude * std::sin(2.0 * constants::pi * frequency_hz[channel] * t);
}

IrisEncoding encode_iris(const IrisRecord& record) {
    // Classic data-set feature ranges (cm); the linear map sends them to 2..10 Hz.
    static constexpr std::array<std::array<double, 2>, 4> kRanges{{
        {4.3, 7.9}, {2.0, 4.4}, {1.0, 6.9}, {0.1, 2.5}}};
    IrisEncoding enc;
    for (int j = 0; j < 4; ++j) {
        const double lo = kRanges[j][0], hi = kRanges[j][1];
        double x = record.features[j];
        if (x < lo || x > hi) {
            enc.clipped = true;
            x = std::clamp(x, lo, hi);
        }
        enc.frequency_hz[j] = 2.0 + 8.0 * (x - lo) / (hi - lo);
    }
    return enc;
}

Nonlinearity OectNonlinearity::make() const {
    device.validate();
    if (!(v_gs_max > v_gs_min)) {
        throw ConfigError("oect nonlinearity: v_gs_max must exceed v_gs_min");
    }
    // Affine output normalization over the admissible gate interval.
    double i_lo = std::numeric_limits<double>::infinity();
    double i_hi = -i_lo;
    const int n_scan = 2048;
    for (int k = 0; k <= n_scan; ++k) {
        const double v = v_gs_min + (v_gs_max - v_gs_min) * k / n_scan;
        const double i = oect::steady_state_current(device, v, v_ds);
        i_lo = std::min(i_lo, i);
        i_hi = std::max(i_hi, i);
    }
    if (!(i_hi > i_lo)) {
        throw ConfigError("oect nonlinearity: flat transfer curve over the scan interval");
    }

    const OectNonlinearity self = *this;
    const double lo = i_lo, span = i_hi - i_lo;
    return [self, lo, span](double feedback, double input) {
        double v = self.v_gs_bias + self.feedback_to_vgs * feedback + self.input_to_vgs * input;
        v = std::clamp(v, self.v_gs_min, self.v_gs_max);
        const double i = oect::steady_state_current(self.device, v, self.v_ds);
        return std::clamp((i - lo) / span, 0.0, 1.0);
    };
}

void IrisConfig::validate() const {
    if (!(tau > 0.0)) throw DomainError("iris: tau must be > 0");
    if (tau_nl < 0.0) throw DomainError("iris: tau_nl must be >= 0");
    if (n_virtual_nodes < 2) throw DomainError("iris: n_virtual_nodes must be >= 2");
    if (steps_per_node < 1) throw DomainError("iris: steps_per_node must be >= 1");
    if (ridge < 0.0) throw DomainError("iris: ridge must be >= 0");
    if (n_train < 3) throw DomainError("iris: n_train must be >= 3");
}

IrisResult run_iris_experiment(const std::vector<IrisRecord>& records, const IrisConfig& cfg,
                               std::uint64_t split_seed) {
    cfg.validate();
    const int n_total = static_cast<int>(records.size());
    if (n_total <= cfg.n_train) {
        throw DomainError("run_iris_experiment: need more records than n_train");
    }

    const double theta = cfg.tau / cfg.n_virtual_nodes;
    const std::vector<double> mask = rademacher_mask(cfg.n_virtual_nodes, cfg.mask_seed);
    MaskSpec mask_spec;
    mask_spec.mask = mask;
    mask_spec.theta = theta;
    mask_spec.n_virtual_nodes = cfg.n_virtual_nodes;
    mask_spec.validate(cfg.tau);

    DelayFeedbackConfig dyn;
    dyn.tau = cfg.tau;
    dyn.tau_nl = cfg.tau_nl;
    dyn.gain = cfg.gain;
    dyn.step = theta / cfg.steps_per_node;
    dyn.nonlinearity = cfg.nonlinearity.make();

    // Collect virtual-node states: one sample per node, centered in the last
    // delay period of the 3 s active segment.
    std::vector<std::vector<double>> states(n_total);
    IrisEncoding first_enc = encode_iris(records[0]);
    const double horizon = first_enc.duration;
    if (horizon < cfg.tau) {
        throw DomainError("run_iris_experiment: tau exceeds the active segment");
    }

    for (int r = 0; r < n_total; ++r) {
        const IrisEncoding enc = encode_iris(records[r]);
        auto input = [&](double t) {
            const long j = std::lround(std::floor(t / theta)) % cfg.n_virtual_nodes;
            const double drive = 0.5 * (enc.channel_value(2, t) + enc.channel_value(3, t));
            const double gate = 0.5 * (enc.channel_value(0, t) + enc.channel_value(1, t));
            return cfg.drive_scale * mask[j] * drive + cfg.gate_scale * gate;
        };
        const Trajectory traj = integrate_delay_system(dyn, input, horizon);
        auto& row = states[r];
        row.resize(cfg.n_virtual_nodes);
        for (int j = 0; j < cfg.n_virtual_nodes; ++j) {
            row[j] = interp_at(traj, horizon - cfg.tau + (j + 0.5) * theta);
        }
    }

    // Seeded split: Fisher-Yates with splitmix64 keeps the permutation
    // platform-independent.
    std::vector<int> order(n_total);
    for (int i = 0; i < n_total; ++i) order[i] = i;
    std::uint64_t rng_state = split_seed ^ 0xA5A5A5A5DEADBEEFull;
    for (int i = n_total - 1; i > 0; --i) {
        const auto j = static_cast<int>(splitmix64(rng_state) % static_cast<std::uint64_t>(i + 1));
        std::swap(order[i], order[j]);
    }

    const int n_train = cfg.n_train;
    const int n_test = n_total - n_train;

    // Column standardization fitted on the training split only.
    std::vector<double> mean(cfg.n_virtual_nodes, 0.0), sdev(cfg.n_virtual_nodes, 1.0);
    if (cfg.standardize) {
        for (int j = 0; j < cfg.n_virtual_nodes; ++j) {
            double m = 0.0;
            for (int r = 0; r < n_train; ++r) m += states[order[r]][j];
            m /= n_train;
            double v = 0.0;
            for (int r = 0; r < n_train; ++r) {
                const double d = states[order[r]][j] - m;
                v += d * d;
            }
            mean[j] = m;
            sdev[j] = v > 0.0 ? std::sqrt(v / n_train) : 1.0;
        }
    }
    auto standardized = [&](int rec) {
        std::vector<double> row = states[rec];
        if (cfg.standardize) {
            for (int j = 0; j < cfg.n_virtual_nodes; ++j) row[j] = (row[j] - mean[j]) / sdev[j];
        }
        return row;
    };

    std::vector<std::vector<double>> x_train(n_train);
    std::vector<std::vector<double>> y_train(n_train, std::vector<double>(3, 0.0));
    for (int r = 0; r < n_train; ++r) {
        x_train[r] = standardized(order[r]);
        y_train[r][records[order[r]].label] = 1.0;
    }
    const ReadoutModel readout = train_readout(x_train, y_train, cfg.ridge);

    IrisResult result;
    result.n_test = n_test;
    int correct = 0;
    for (int r = n_train; r < n_total; ++r) {
        const int truth = records[order[r]].label;
        const int pred = readout.predict(standardized(order[r]));
        result.confusion[truth][pred] += 1;
        if (pred == truth) ++correct;
    }
    result.accuracy = n_test > 0 ? static_cast<double>(correct) / n_test : 0.0;
    return result;
}

}  // namespace otk::reservoir
