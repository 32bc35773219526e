#include "otk/impedance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "otk/constants.hpp"

namespace otk::impedance {

namespace {

using cplx = std::complex<double>;

// coth/tanh on the right half-plane via e^(-2s), with the asymptote cutover
// at |s| > 20 (e^(-40) is far below double precision) and a series branch for
// tiny |s| where the exponential form would cancel catastrophically.
cplx coth_stable(cplx s) {
    const double mag = std::abs(s);
    if (mag > 20.0) return cplx(1.0, 0.0);
    if (mag < 1e-4) return 1.0 / s + s / 3.0 - s * s * s / 45.0;
    const cplx e = std::exp(-2.0 * s);
    return (1.0 + e) / (1.0 - e);
}

cplx tanh_stable(cplx s) {
    const double mag = std::abs(s);
    if (mag > 20.0) return cplx(1.0, 0.0);
    if (mag < 1e-4) return s - s * s * s / 3.0;
    const cplx e = std::exp(-2.0 * s);
    return (1.0 - e) / (1.0 + e);
}

}  // namespace

void WarburgParams::validate() const {
    if (!(r_w > 0.0)) throw DomainError("warburg: r_w must be > 0");
    if (!(omega_d > 0.0)) throw DomainError("warburg: omega_d must be > 0");
    if (!(exponent > 0.0 && exponent <= 0.5)) {
        throw DomainError("warburg: exponent must be in (0, 0.5]");
    }
}

void CircuitModel::validate() const {
    if (r_s < 0.0) throw DomainError("circuit: r_s must be >= 0");
    if (rc1.resistance < 0.0 || rc2.resistance < 0.0) {
        throw DomainError("circuit: RC resistances must be >= 0");
    }
    if (!(rc1.capacitance > 0.0) || !(rc2.capacitance > 0.0)) {
        throw DomainError("circuit: RC capacitances must be > 0");
    }
    warburg.validate();
}

void ImpedanceSpectrum::validate() const {
    double prev = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (!(samples[k].omega > 0.0)) {
            throw DomainError("spectrum: omega must be > 0 (sample " + std::to_string(k) + ")");
        }
        if (k > 0 && !(samples[k].omega > prev)) {
            throw DomainError("spectrum: omegas must be strictly increasing (sample " +
                              std::to_string(k) + ")");
        }
        prev = samples[k].omega;
    }
}

std::complex<double> warburg_impedance(const WarburgParams& w, double omega) {
    if (!(omega > 0.0)) throw DomainError("warburg_impedance: omega must be > 0");
    const cplx i_unit(0.0, 1.0);
    const cplx s = std::pow(i_unit * omega / w.omega_d, w.exponent);
    const cplx h = w.boundary == Boundary::reflecting ? coth_stable(s) : tanh_stable(s);
    return w.r_w * h / s;
}

std::complex<double> circuit_impedance(const CircuitModel& m, double omega) {
    if (!(omega > 0.0)) throw DomainError("circuit_impedance: omega must be > 0");
    const cplx i_unit(0.0, 1.0);
    cplx z = m.r_s;
    z += m.rc1.resistance / (1.0 + i_unit * omega * m.rc1.resistance * m.rc1.capacitance);
    z += m.rc2.resistance / (1.0 + i_unit * omega * m.rc2.resistance * m.rc2.capacitance);
    z += warburg_impedance(m.warburg, omega);
    return z;
}

namespace {

// Log-space parameter packing for the fitter. Zero resistances are lifted to
// a 1e-12 Ohm floor so every free parameter stays strictly positive.
struct ParamLayout {
    bool symmetric_rc = false;
    bool fit_exponent = false;

    [[nodiscard]] std::vector<double> pack(const CircuitModel& m) const {
        auto lg = [](double v) { return std::log(std::max(v, 1e-12)); };
        std::vector<double> p;
        p.push_back(lg(m.r_s));
        p.push_back(lg(m.rc1.resistance));
        p.push_back(lg(m.rc1.capacitance));
        if (!symmetric_rc) {
            p.push_back(lg(m.rc2.resistance));
            p.push_back(lg(m.rc2.capacitance));
        }
        p.push_back(lg(m.warburg.r_w));
        p.push_back(lg(m.warburg.omega_d));
        if (fit_exponent) p.push_back(lg(m.warburg.exponent));
        return p;
    }

    [[nodiscard]] CircuitModel unpack(const std::vector<double>& p, const CircuitModel& base) const {
        CircuitModel m = base;
        std::size_t k = 0;
        m.r_s = std::exp(p[k++]);
        m.rc1.resistance = std::exp(p[k++]);
        m.rc1.capacitance = std::exp(p[k++]);
        if (symmetric_rc) {
            m.rc2 = m.rc1;
        } else {
            m.rc2.resistance = std::exp(p[k++]);
            m.rc2.capacitance = std::exp(p[k++]);
        }
        m.warburg.r_w = std::exp(p[k++]);
        m.warburg.omega_d = std::exp(p[k++]);
        if (fit_exponent) m.warburg.exponent = std::min(std::exp(p[k++]), 0.5);
        return m;
    }
};

Eigen::VectorXd stacked_residuals(const CircuitModel& m, const ImpedanceSpectrum& spec,
                                  const std::vector<double>& weights) {
    const std::size_t n = spec.samples.size();
    Eigen::VectorXd r(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx zm = circuit_impedance(m, spec.samples[k].omega);
        const cplx dz = zm - spec.samples[k].z;
        r(2 * k) = weights[k] * dz.real();
        r(2 * k + 1) = weights[k] * dz.imag();
    }
    return r;
}

}  // namespace

FitResult fit_spectrum(const ImpedanceSpectrum& spec, const CircuitModel& guess,
                       const FitOptions& options) {
    spec.validate();
    ParamLayout layout;
    layout.symmetric_rc = options.symmetric_rc;
    layout.fit_exponent = options.fit_exponent;

    std::vector<double> p = layout.pack(guess);
    const int n_par = static_cast<int>(p.size());
    const int m_res = 2 * static_cast<int>(spec.samples.size());
    if (m_res < n_par) {
        throw DomainError("fit_spectrum: fewer residuals than free parameters");
    }

    std::vector<double> weights(spec.samples.size(), 1.0);
    for (std::size_t k = 0; k < spec.samples.size(); ++k) {
        switch (options.weighting) {
            case Weighting::modulus: {
                const double mag = std::abs(spec.samples[k].z);
                weights[k] = 1.0 / std::max(mag, 1e-300);
                break;
            }
            case Weighting::none:
                weights[k] = 1.0;
                break;
            case Weighting::custom:
                weights[k] = spec.samples[k].weight;
                break;
        }
    }

    auto cost_of = [&](const std::vector<double>& pv) {
        const Eigen::VectorXd r = stacked_residuals(layout.unpack(pv, guess), spec, weights);
        return 0.5 * r.squaredNorm();
    };

    auto jacobian_at = [&](const std::vector<double>& pv, Eigen::MatrixXd& jac) {
        const double h = 1e-6;
        std::vector<double> pp = pv;
        for (int j = 0; j < n_par; ++j) {
            pp[j] = pv[j] + h;
            const Eigen::VectorXd r_hi = stacked_residuals(layout.unpack(pp, guess), spec, weights);
            pp[j] = pv[j] - h;
            const Eigen::VectorXd r_lo = stacked_residuals(layout.unpack(pp, guess), spec, weights);
            pp[j] = pv[j];
            jac.col(j) = (r_hi - r_lo) / (2.0 * h);
        }
    };

    FitResult out;
    out.n_parameters = n_par;

    Eigen::VectorXd r = stacked_residuals(layout.unpack(p, guess), spec, weights);
    double cost = 0.5 * r.squaredNorm();
    Eigen::MatrixXd jac(m_res, n_par);
    double mu = -1.0;  // initialized from the first JtJ diagonal
    bool converged = false;

    std::vector<double> best_p = p;
    double best_cost = cost;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        jacobian_at(p, jac);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;

        if (grad.lpNorm<Eigen::Infinity>() < options.gradient_tol * (1.0 + cost)) {
            out.iterations = iter;
            converged = true;
            break;
        }

        Eigen::VectorXd diag = jtj.diagonal();
        const double diag_max = diag.maxCoeff();
        if (diag_max <= 0.0) {
            out.degenerate = true;
            out.iterations = iter;
            converged = true;  // flat model: nothing left to improve
            break;
        }
        // Columns with no sensitivity (parameter has no effect on the model)
        // are regularized via a floor on the damping diagonal.
        const double diag_floor = diag_max * 1e-14;
        bool saw_flat = false;
        for (int j = 0; j < n_par; ++j) {
            if (diag(j) < diag_floor) {
                diag(j) = diag_floor;
                saw_flat = true;
            }
        }
        if (saw_flat) out.degenerate = true;
        if (mu < 0.0) mu = 1e-3 * diag_max;

        bool accepted = false;
        for (int tries = 0; tries < 50 && !accepted; ++tries) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += mu * diag;
            const Eigen::VectorXd delta = a.ldlt().solve(-grad);

            std::vector<double> p_new = p;
            for (int j = 0; j < n_par; ++j) p_new[j] += delta(j);
            const double new_cost = cost_of(p_new);

            if (new_cost < cost) {
                const double step_rel = delta.lpNorm<Eigen::Infinity>();
                p = p_new;
                r = stacked_residuals(layout.unpack(p, guess), spec, weights);
                cost = new_cost;
                mu = std::max(mu / 3.0, 1e-18 * diag_max);
                accepted = true;
                if (cost < best_cost) {
                    best_cost = cost;
                    best_p = p;
                }
                if (step_rel < options.step_tol) {
                    out.iterations = iter + 1;
                    converged = true;
                }
            } else {
                mu *= 4.0;
            }
        }
        if (!accepted) {
            // Damping exhausted: gradient direction yields no improvement,
            // treat the current point as the (local) optimum.
            out.iterations = iter + 1;
            converged = true;
        }
        if (converged) break;
        out.iterations = iter + 1;
    }

    if (!converged) {
        std::ostringstream msg;
        msg << "fit_spectrum: no convergence after " << options.max_iterations
            << " iterations; best residual norm " << std::sqrt(2.0 * best_cost);
        const CircuitModel best = layout.unpack(best_p, guess);
        msg << " (best-so-far r_w = " << best.warburg.r_w
            << ", omega_d = " << best.warburg.omega_d << ")";
        throw NumericError(msg.str());
    }

    out.model = layout.unpack(p, guess);
    out.residual_norm = std::sqrt(2.0 * cost);

    // Covariance proxy: residual variance times the inverse normal matrix,
    // in log-parameter coordinates.
    jacobian_at(p, jac);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const int dof = std::max(1, m_res - n_par);
    const double sigma2 = 2.0 * cost / dof;
    const Eigen::MatrixXd cov =
        sigma2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
    out.covariance.resize(static_cast<std::size_t>(n_par) * n_par);
    for (int i = 0; i < n_par; ++i) {
        for (int j = 0; j < n_par; ++j) {
            out.covariance[static_cast<std::size_t>(i) * n_par + j] = cov(i, j);
        }
    }
    return out;
}

double extract_rw_star(const CircuitModel& fitted) {
    const WarburgParams& w = fitted.warburg;
    if (w.boundary == Boundary::absorbing) {
        return w.r_w;  // tanh form converges to r_w on the real axis
    }
    if (w.exponent == 0.5) {
        return w.r_w / 3.0;  // ideal diffusion: cos(pi/2) kills the divergent term
    }
    // Small-s expansion Z ~ r_w*(s^-2 + 1/3) evaluated at the documented
    // reference frequency 1e-6*omega_d; Re(s^-2) = (omega/omega_d)^(-2n)*cos(pi*n).
    const double ratio = 1e-6;
    const double n = w.exponent;
    return w.r_w * (std::pow(ratio, -2.0 * n) * std::cos(constants::pi * n) + 1.0 / 3.0);
}

double diffusion_constant(double omega_d, double b) {
    if (!(b > 0.0)) throw DomainError("diffusion_constant: b must be > 0");
    if (omega_d < 0.0) throw DomainError("diffusion_constant: omega_d must be >= 0");
    return omega_d * b * b;
}

double diffusion_resistance(double t, double b, double area, double d, double c_mol_l) {
    if (!(t > 0.0) || !(b > 0.0) || !(area > 0.0) || !(d > 0.0) || !(c_mol_l > 0.0)) {
        throw DomainError("diffusion_resistance: all arguments must be > 0");
    }
    const double number_density = c_mol_l * 1000.0 * constants::avogadro;  // 1/m^3
    const double e = constants::elementary_charge;
    return constants::k_boltzmann * t * b / (e * e * area * d * number_density);
}

void SensorCalibration::validate() const {
    if (curves.size() < 2) {
        throw ConfigError("calibration: need at least two species");
    }
    for (const SpeciesCurve& c : curves) {
        if (c.points.size() < 2) {
            throw ConfigError("calibration: species '" + c.species + "' needs >= 2 concentrations");
        }
        for (std::size_t k = 0; k < c.points.size(); ++k) {
            if (!(c.points[k].concentration > 0.0) || !(c.points[k].r_w_star > 0.0)) {
                throw ConfigError("calibration: species '" + c.species +
                                  "' has non-positive concentration or r_w_star");
            }
            if (k > 0 && !(c.points[k].concentration > c.points[k - 1].concentration)) {
                throw ConfigError("calibration: species '" + c.species +
                                  "' concentrations must be strictly increasing");
            }
        }
    }
}

IonClassification classify_ion(double v_to, double r_w_star, const SensorCalibration& calib) {
    calib.validate();
    if (!(r_w_star > 0.0)) throw DomainError("classify_ion: r_w_star must be > 0");

    // Normalize both feature axes by the calibration extent so volts and
    // log-ohms carry equal weight in the distance.
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const SpeciesCurve& c : calib.curves) {
        for (const CalibrationPoint& q : c.points) {
            x_min = std::min(x_min, q.v_to);
            x_max = std::max(x_max, q.v_to);
            y_min = std::min(y_min, std::log10(q.r_w_star));
            y_max = std::max(y_max, std::log10(q.r_w_star));
        }
    }
    const double x_scale = x_max > x_min ? x_max - x_min : 1.0;
    const double y_scale = y_max > y_min ? y_max - y_min : 1.0;

    const double qx = (v_to - x_min) / x_scale;
    const double qy = (std::log10(r_w_star) - y_min) / y_scale;

    struct Best {
        double dist2 = std::numeric_limits<double>::infinity();
        std::size_t segment = 0;
        double t_along = 0.0;
    };

    std::string best_species;
    double best_conc = 0.0;
    double best_d = std::numeric_limits<double>::infinity();
    double runner_d = std::numeric_limits<double>::infinity();

    for (const SpeciesCurve& c : calib.curves) {
        Best b;
        for (std::size_t k = 0; k + 1 < c.points.size(); ++k) {
            const double ax = (c.points[k].v_to - x_min) / x_scale;
            const double ay = (std::log10(c.points[k].r_w_star) - y_min) / y_scale;
            const double bx = (c.points[k + 1].v_to - x_min) / x_scale;
            const double by = (std::log10(c.points[k + 1].r_w_star) - y_min) / y_scale;
            const double ux = bx - ax, uy = by - ay;
            const double len2 = ux * ux + uy * uy;
            double t = len2 > 0.0 ? ((qx - ax) * ux + (qy - ay) * uy) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            const double dx = qx - (ax + t * ux), dy = qy - (ay + t * uy);
            const double d2 = dx * dx + dy * dy;
            if (d2 < b.dist2) {
                b.dist2 = d2;
                b.segment = k;
                b.t_along = t;
            }
        }
        const double d = std::sqrt(b.dist2);
        if (d < best_d) {
            runner_d = best_d;
            best_d = d;
            best_species = c.species;
            const CalibrationPoint& p0 = c.points[b.segment];
            const CalibrationPoint& p1 = c.points[b.segment + 1];
            best_conc = std::exp((1.0 - b.t_along) * std::log(p0.concentration) +
                                 b.t_along * std::log(p1.concentration));
        } else if (d < runner_d) {
            runner_d = d;
        }
    }

    IonClassification out;
    out.species = best_species;
    out.concentration = best_conc;
    out.distance = best_d;
    if (best_d + runner_d > 0.0) {
        out.confidence = (runner_d - best_d) / (runner_d + best_d);
    } else {
        out.confidence = 0.0;  // query sits on two curves at once
    }
    return out;
}

}  // namespace otk::impedance
