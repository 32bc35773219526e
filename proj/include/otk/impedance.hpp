#pragma once

#include <complex>
#include <string>
#include <vector>

#include "otk/errors.hpp"

namespace otk::impedance {

enum class Boundary { reflecting, absorbing };

// Finite-length diffusion (Warburg) element between two electrodes.
// The reflecting boundary gives the coth form, the absorbing one tanh.
// `exponent` generalizes the ideal 1/2 power; measured cells fall around
// 0.3..0.4, and both occurrences of the power are replaced symmetrically so
// the high-frequency log-log slope equals -exponent.
struct WarburgParams {
    double r_w = 1e6;       // diffusion resistance (Ohm)
    double omega_d = 0.1;   // characteristic frequency D/b^2 (rad/s)
    double exponent = 0.5;  // in (0, 0.5]
    Boundary boundary = Boundary::reflecting;

    void validate() const;
};

struct RcElement {
    double resistance = 0.0;   // Ohm
    double capacitance = 1e-9; // F
};

// Series resistance + two parallel RC elements (electrode films) + Warburg.
struct CircuitModel {
    double r_s = 0.0;  // Ohm
    RcElement rc1;
    RcElement rc2;
    WarburgParams warburg;

    void validate() const;
};

struct SpectrumSample {
    double omega = 0.0;             // rad/s
    std::complex<double> z;         // Ohm
    double weight = 1.0;            // optional per-sample weight
};

struct ImpedanceSpectrum {
    std::vector<SpectrumSample> samples;

    // Requires positive, strictly increasing frequencies.
    void validate() const;
};

[[nodiscard]] std::complex<double> warburg_impedance(const WarburgParams& w, double omega);
[[nodiscard]] std::complex<double> circuit_impedance(const CircuitModel& m, double omega);

enum class Weighting { modulus, none, custom };

struct FitOptions {
    int max_iterations = 200;
    Weighting weighting = Weighting::modulus;
    bool fit_exponent = false;   // exponent held at the guess value unless set
    bool symmetric_rc = false;   // constrain rc1 == rc2 (shared parameters)
    double gradient_tol = 1e-10;
    double step_tol = 1e-12;
};

struct FitResult {
    CircuitModel model;
    double residual_norm = 0.0;        // sqrt(sum of squared weighted residuals)
    std::vector<double> covariance;    // row-major (n x n) proxy for the log-parameters
    int n_parameters = 0;
    int iterations = 0;
    bool degenerate = false;           // rank-deficient Jacobian encountered
};

// Damped (Levenberg-Marquardt) least squares on stacked real/imaginary
// residuals. Positive parameters are fitted in log space. Deterministic for a
// given guess and options. Throws NumericError (with best-so-far diagnostics)
// when the iteration cap is reached without convergence.
[[nodiscard]] FitResult fit_spectrum(const ImpedanceSpectrum& spec, const CircuitModel& guess,
                                     const FitOptions& options = {});

// Equivalent diffusion resistance: the low-frequency real-axis value of the
// Warburg element after series terms are removed. For the ideal exponent 1/2
// this is exactly r_w/3; the generalized form is evaluated from the small-s
// expansion at the reference frequency 1e-6*omega_d.
[[nodiscard]] double extract_rw_star(const CircuitModel& fitted);

/// D = omega_d * b^2 for electrode separation b.
[[nodiscard]] double diffusion_constant(double omega_d, double b);

/// R_W = k_B*T*b / (e^2 * area * D * n) with n the number density of a c mol/l solution.
[[nodiscard]] double diffusion_resistance(double t, double b, double area, double d, double c_mol_l);

struct CalibrationPoint {
    double concentration = 0.0;  // mol/l
    double v_to = 0.0;           // turn-off voltage (V)
    double r_w_star = 0.0;       // Ohm
};

struct SpeciesCurve {
    std::string species;
    std::vector<CalibrationPoint> points;  // strictly monotone in concentration
};

struct SensorCalibration {
    std::vector<SpeciesCurve> curves;

    void validate() const;
};

struct IonClassification {
    std::string species;
    double concentration = 0.0;  // log-interpolated along the winning curve
    double confidence = 0.0;     // margin to the runner-up species, in [0,1]
    double distance = 0.0;       // normalized feature-space distance to the winning curve
};

// Nearest-curve classification in the (v_to, log10 r_w_star) plane, axes
// normalized by the calibration extent. Throws ConfigError on an empty or
// under-specified calibration.
[[nodiscard]] IonClassification classify_ion(double v_to, double r_w_star,
                                             const SensorCalibration& calib);

}  // namespace otk::impedance
