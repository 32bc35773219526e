#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "otk/errors.hpp"
#include "otk/oect.hpp"

namespace otk::reservoir {

// Nonlinear node transfer function f(feedback, input) of the delay loop.
using Nonlinearity = std::function<double(double feedback, double input)>;

// Time-dependent scalar drive x(t).
using InputFn = std::function<double(double)>;

// Single-node delayed-feedback system tau_nl*dy/dt + y = gain*f(y(t-tau), x(t)).
struct DelayFeedbackConfig {
    double tau_nl = 0.01;   // intrinsic response time (s); 0 selects the adiabatic limit
    double tau = 0.5;       // delay-line round-trip time (s)
    double gain = 1.0;      // loop gain lambda
    double step = 1e-3;     // integrator step (s); must satisfy step <= tau/50
    Nonlinearity nonlinearity;
    std::function<double(double)> history;  // initial condition on [-tau, 0]; default 0
    double divergence_bound = 1e6;

    void validate() const;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<double> y;
    double step = 0.0;
};

// Fixed-step exponential-integrator scheme: the linear relaxation is advanced
// exactly over each step while the nonlinearity is held at its left-endpoint
// value; delayed values come from the stored grid with linear interpolation.
// Throws NumericError if |y| exceeds cfg.divergence_bound.
[[nodiscard]] Trajectory integrate_delay_system(const DelayFeedbackConfig& cfg,
                                                const InputFn& input, double horizon);

// Adiabatic limit tau_nl << tau: y_k = gain*f(y_{k-1}, x_k).
// inputs may be empty (x = 0), shorter sequences repeat cyclically.
[[nodiscard]] std::vector<double> iterate_adiabatic_map(const DelayFeedbackConfig& cfg,
                                                        const std::vector<double>& inputs,
                                                        int n, double y0);

/// Logistic node transfer f(feedback, input) = u*(1-u) with u = feedback + input.
[[nodiscard]] Nonlinearity logistic_nonlinearity();

// One update y -> map(param, y) of a scalar map family.
using ScalarMap = std::function<double(double param, double y)>;

/// The logistic family y -> param*y*(1-y).
[[nodiscard]] ScalarMap logistic_map();

struct BifurcationDiagram {
    std::vector<double> params;
    std::vector<std::vector<double>> samples;  // asymptotic samples per parameter
};

[[nodiscard]] BifurcationDiagram bifurcation_diagram(const ScalarMap& map, double param_lo,
                                                     double param_hi, int n_params,
                                                     int n_transient, int n_sample, double y0);

// Bifurcation sweep of the continuous delay system over the gain: after
// n_transient delay periods, y is sampled once per period.
[[nodiscard]] BifurcationDiagram bifurcation_from_system(DelayFeedbackConfig cfg,
                                                         const std::vector<double>& gains,
                                                         int n_transient, int n_sample);

// Gap-amplitude bisection for the parameter where a stable fixed point gives
// way to a period-2 cycle: below the boundary |y_{k+1}-y_k| -> 0, above it
// stays finite. Requires the endpoints to classify differently.
[[nodiscard]] double locate_first_period_doubling(const ScalarMap& map, double param_lo,
                                                  double param_hi, double y0 = 0.5,
                                                  long n_iter = 50000,
                                                  double amplitude_threshold = 1e-3);

struct PhasePortrait {
    std::vector<std::array<double, 2>> points;  // (y(t), y(t-tau))
};

// Delay embedding of a trajectory; the first transient_time seconds are
// discarded. Throws DomainError when the remaining span is shorter than tau.
[[nodiscard]] PhasePortrait phase_portrait(const Trajectory& traj, double tau,
                                           double transient_time = 0.0);

struct BoxCountResult {
    double dimension = 0.0;
    std::vector<double> scales;   // box sizes as fractions of the data extent
    std::vector<std::size_t> counts;
    bool resolution_warning = false;  // smallest boxes no longer saturated by the points
};

// Box-counting dimension: least-squares slope of log N(eps) vs log(1/eps)
// over geometrically spaced scales in [scale_min, scale_max] (fractions of
// the bounding-box extent). Requires at least 1000 points.
[[nodiscard]] BoxCountResult box_counting_dimension(
    const std::vector<std::array<double, 2>>& points, double scale_min = 1.0 / 128.0,
    double scale_max = 0.25, int n_scales = 6);

struct MaskSpec {
    std::vector<double> mask;    // one weight per virtual node, typically +/-1
    double theta = 0.01;         // node spacing (s)
    int n_virtual_nodes = 50;

    // Checks mask length and n_virtual_nodes*theta == tau within 1e-9 relative.
    void validate(double tau) const;
};

/// Seeded random +/-1 mask of length n.
[[nodiscard]] std::vector<double> rademacher_mask(int n, std::uint64_t seed);

struct PiecewiseConstantDrive {
    std::vector<double> values;  // one block per virtual node
    double theta = 0.0;

    [[nodiscard]] double value_at(double t) const;  // t wraps modulo one tau
};

// Sample-and-hold input for one delay period: block j carries
// mask[j] * u[j mod u.size()], held for theta.
[[nodiscard]] PiecewiseConstantDrive mask_and_multiplex(const std::vector<double>& u,
                                                        const MaskSpec& mask);

struct ReadoutModel {
    std::vector<double> weights;  // row-major (n_inputs+1) x n_classes, bias row last
    int n_inputs = 0;
    int n_classes = 0;
    double ridge = 0.0;

    [[nodiscard]] std::vector<double> scores(const std::vector<double>& state) const;
    [[nodiscard]] int predict(const std::vector<double>& state) const;
};

// Ridge-regularized least squares with a bias column (the bias is regularized
// together with the weights). Throws NumericError when ridge = 0 and the
// augmented state matrix is rank deficient.
[[nodiscard]] ReadoutModel train_readout(const std::vector<std::vector<double>>& states,
                                         const std::vector<std::vector<double>>& targets,
                                         double ridge);

// ---------------------------------------------------------------------------
// Iris frequency-encoding experiment
// ---------------------------------------------------------------------------

struct IrisRecord {
    std::array<double, 4> features{};  // sepal length/width, petal length/width (cm)
    int label = 0;                     // 0 setosa, 1 versicolor, 2 virginica
};

// Loads the classic 150-row CSV (4 numeric columns + species name or index).
// Throws IoError when the file is missing or malformed.
[[nodiscard]] std::vector<IrisRecord> load_iris_csv(const std::string& path);

struct IrisEncoding {
    std::array<double, 4> frequency_hz{};  // per-channel sinusoid frequency
    double duration = 3.0;                 // active segment (s)
    double gap = 3.0;                      // quiet segment after the tone (s)
    double amplitude = 1.0;                // V
    bool clipped = false;                  // a feature fell outside the data-set range

    [[nodiscard]] double channel_value(int channel, double t) const;
};

// Linear map of each feature onto [2, 10] Hz over the classic data-set ranges
// (sepal 4.3-7.9 / 2.0-4.4, petal 1.0-6.9 / 0.1-2.5 cm); out-of-range
// features are clipped and flagged.
[[nodiscard]] IrisEncoding encode_iris(const IrisRecord& record);

// OECT transfer curve as the loop nonlinearity: feedback and input perturb
// the gate around a bias at fixed drain voltage, and the drain current is
// affinely normalized to [0,1] over the configured gate interval.
struct OectNonlinearity {
    oect::OectParams device;
    double v_ds = 0.5;             // fixed drain bias (V)
    double v_gs_bias = 0.5;        // gate operating point (V)
    double feedback_to_vgs = 1.0;  // V per unit feedback
    double input_to_vgs = 1.0;     // V per volt of drive
    double v_gs_min = -1.5;        // normalization scan interval
    double v_gs_max = 2.5;

    [[nodiscard]] Nonlinearity make() const;
};

struct IrisConfig {
    // Reservoir dynamics
    double tau = 0.5;        // delay (s)
    double tau_nl = 0.02;    // node response time (s)
    double gain = 0.9;
    int n_virtual_nodes = 50;
    int steps_per_node = 4;  // integrator step = theta / steps_per_node
    std::uint64_t mask_seed = 0x5eed;

    // Channel routing: petal channels drive the masked input, sepal channels
    // act as an unmasked gate perturbation.
    double drive_scale = 1.0;
    double gate_scale = 0.5;

    OectNonlinearity nonlinearity;

    // Readout
    double ridge = 1e-3;
    bool standardize = true;
    int n_train = 120;

    void validate() const;
};

struct IrisResult {
    std::array<std::array<int, 3>, 3> confusion{};  // rows true, columns predicted
    double accuracy = 0.0;
    int n_test = 0;
};

// Full pipeline: encode -> integrate -> sample virtual nodes in the last
// delay period -> ridge readout on a seeded 120/30 split.
[[nodiscard]] IrisResult run_iris_experiment(const std::vector<IrisRecord>& records,
                                             const IrisConfig& cfg, std::uint64_t split_seed);

}  // namespace otk::reservoir
