#include "otk/opbt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otk/constants.hpp"

namespace otk::opbt {

namespace {

// d/dT of activation_factor: F(T) * (e_act/k_B) / T^2.
double activation_factor_slope(double e_act_ev, double t, double t_ambient) {
    const double f = activation_factor(e_act_ev, t, t_ambient);
    return f * (e_act_ev / constants::k_boltzmann_ev) / (t * t);
}

double current_slope_dT(const OpbtThermalParams& p, double v, double t) {
    const double field_term = p.i_ref * std::pow(v / p.v_ref, p.alpha);
    return field_term * activation_factor_slope(p.e_act_on, t, p.t_ambient) +
           p.i_off * activation_factor_slope(p.e_act_off, t, p.t_ambient);
}

// Heat-balance residual h(T) = T_a + Theta*V*I(V,T) - T.
// Roots of h are steady states; h' < 0 marks a stable balance.
double balance_residual(const OpbtThermalParams& p, double v, double t) {
    return p.t_ambient + p.theta_th * v * current_at(p, v, t) - t;
}

double balance_slope(const OpbtThermalParams& p, double v, double t) {
    return p.theta_th * v * current_slope_dT(p, v, t) - 1.0;
}

OperatingPoint make_point(const OpbtThermalParams& p, double v, double t) {
    OperatingPoint op;
    op.voltage = v;
    op.current = current_at(p, v, t);
    op.temperature = t;
    op.stable = balance_slope(p, v, t) < 0.0;
    return op;
}

}  // namespace

void OpbtThermalParams::validate() const {
    if (!(i_ref > 0.0)) throw DomainError("opbt: i_ref must be > 0");
    if (!(v_ref > 0.0)) throw DomainError("opbt: v_ref must be > 0");
    if (!(alpha >= 1.0)) throw DomainError("opbt: alpha must be >= 1");
    if (i_off < 0.0) throw DomainError("opbt: i_off must be >= 0");
    if (e_act_on < 0.0 || e_act_off < 0.0) throw DomainError("opbt: activation energies must be >= 0");
    if (theta_th < 0.0) throw DomainError("opbt: theta_th must be >= 0");
    if (!(t_ambient > 0.0)) throw DomainError("opbt: t_ambient must be > 0");
    if (!(t_max > t_ambient)) throw DomainError("opbt: t_max must exceed t_ambient");
    if (grid_points < 2) throw DomainError("opbt: grid_points must be >= 2");
}

void PulseSpec::validate() const {
    if (!(pulse_width > 0.0)) throw DomainError("pulse: pulse_width must be > 0");
    if (!(duty_cycle > 0.0 && duty_cycle <= 1.0)) throw DomainError("pulse: duty_cycle must be in (0,1]");
    if (!(thermal_capacitance > 0.0)) throw DomainError("pulse: thermal_capacitance must be > 0");
}

double activation_factor(double e_act_ev, double t, double t_ambient) {
    if (!(t > 0.0) || !(t_ambient > 0.0)) {
        throw DomainError("activation_factor: temperatures must be > 0");
    }
    return std::exp(-(e_act_ev / constants::k_boltzmann_ev) * (1.0 / t - 1.0 / t_ambient));
}

double current_at(const OpbtThermalParams& p, double v, double t) {
    if (v < 0.0) throw DomainError("current_at: v must be >= 0");
    return p.i_ref * std::pow(v / p.v_ref, p.alpha) * activation_factor(p.e_act_on, t, p.t_ambient) +
           p.i_off * activation_factor(p.e_act_off, t, p.t_ambient);
}

std::vector<OperatingPoint> solve_steady_state(const OpbtThermalParams& p, double v) {
    if (v < 0.0) throw DomainError("solve_steady_state: v must be >= 0");

    const int n = p.grid_points;
    const double dt = (p.t_max - p.t_ambient) / (n - 1);
    std::vector<OperatingPoint> roots;

    double t_prev = p.t_ambient;
    double h_prev = balance_residual(p, v, t_prev);
    if (h_prev == 0.0) roots.push_back(make_point(p, v, t_prev));

    for (int i = 1; i < n; ++i) {
        const double t_i = p.t_ambient + i * dt;
        const double h_i = balance_residual(p, v, t_i);
        if (h_i == 0.0) {
            roots.push_back(make_point(p, v, t_i));
        } else if (h_prev * h_i < 0.0) {
            // Bisect to machine-level interval width; the balance residual is
            // smooth, so ~80 halvings push |h| far below the 1e-9 budget.
            double lo = t_prev, hi = t_i;
            double h_lo = h_prev;
            for (int iter = 0; iter < 100 && hi - lo > 1e-12; ++iter) {
                const double mid = 0.5 * (lo + hi);
                const double h_mid = balance_residual(p, v, mid);
                if (h_mid == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (h_lo * h_mid < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    h_lo = h_mid;
                }
            }
            roots.push_back(make_point(p, v, 0.5 * (lo + hi)));
        }
        t_prev = t_i;
        h_prev = h_i;
    }

    if (roots.empty()) {
        throw NumericError(
            "solve_steady_state: no heat balance below t_max = " + std::to_string(p.t_max) +
            " K at v = " + std::to_string(v) + " V (thermal runaway)");
    }
    return roots;
}

std::vector<OperatingPoint> trace_current_controlled(const OpbtThermalParams& p,
                                                     const std::vector<double>& currents) {
    std::vector<OperatingPoint> curve;
    curve.reserve(currents.size());

    for (double i_set : currents) {
        if (!(i_set > 0.0)) throw DomainError("trace_current_controlled: currents must be > 0");

        // phi(V) = I(V, T_a + Theta*V*I_set) - I_set is strictly increasing in V
        // for alpha >= 1, so the operating voltage is the unique sign change.
        auto phi = [&](double v) {
            const double t = p.t_ambient + p.theta_th * v * i_set;
            return current_at(p, v, t) - i_set;
        };

        if (phi(0.0) > 0.0) {
            throw DomainError("trace_current_controlled: requested current below the off-state floor");
        }

        double hi = p.v_ref;
        int doublings = 0;
        while (phi(hi) < 0.0) {
            hi *= 2.0;
            if (++doublings > 200) {
                throw NumericError("trace_current_controlled: no voltage bracket after 200 doublings at I = " +
                                   std::to_string(i_set) + " A");
            }
        }
        double lo = 0.0;
        for (int iter = 0; iter < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (phi(mid) < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double v = 0.5 * (lo + hi);
        const double t = p.t_ambient + p.theta_th * v * i_set;
        OperatingPoint op;
        op.voltage = v;
        op.current = i_set;
        op.temperature = t;
        op.stable = balance_slope(p, v, t) < 0.0;
        curve.push_back(op);
    }
    return curve;
}

double pulsed_steady_temperature(const OpbtThermalParams& p, const PulseSpec& pulse, double v) {
    pulse.validate();
    if (v < 0.0) throw DomainError("pulsed_steady_temperature: v must be >= 0");
    if (p.theta_th == 0.0) return p.t_ambient;  // ideal heat sink pins T

    const double period = pulse.pulse_width / pulse.duty_cycle;
    const double off_time = period - pulse.pulse_width;
    const double tau_th = p.theta_th * pulse.thermal_capacitance;

    // On-phase ODE: dT/dt = (V*I(V,T) - (T - T_a)/Theta) / C. The off phase is
    // a pure exponential relaxation toward T_a and is advanced in closed form,
    // so the power discontinuity always falls on a phase boundary.
    auto deriv_on = [&](double temp) {
        return (v * current_at(p, v, temp) - (temp - p.t_ambient) / p.theta_th) /
               pulse.thermal_capacitance;
    };

    double h = std::min(tau_th / 200.0, pulse.pulse_width / 50.0);
    const long steps_on = std::max<long>(1, static_cast<long>(std::ceil(pulse.pulse_width / h)));
    h = pulse.pulse_width / static_cast<double>(steps_on);

    double temp = p.t_ambient;
    double prev_peak = -1.0;
    const int max_periods = 200000;
    for (int k = 0; k < max_periods; ++k) {
        double peak = temp;
        for (long s = 0; s < steps_on; ++s) {
            const double k1 = deriv_on(temp);
            const double k2 = deriv_on(temp + 0.5 * h * k1);
            const double k3 = deriv_on(temp + 0.5 * h * k2);
            const double k4 = deriv_on(temp + h * k3);
            temp += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (temp > p.t_max) {
                throw NumericError("pulsed_steady_temperature: thermal runaway within a pulse (T > t_max)");
            }
            peak = std::max(peak, temp);
        }
        if (off_time > 0.0) {
            temp = p.t_ambient + (temp - p.t_ambient) * std::exp(-off_time / tau_th);
        }
        if (prev_peak >= 0.0 && std::abs(peak - prev_peak) < 1e-6) {
            return peak;
        }
        prev_peak = peak;
    }
    throw NumericError("pulsed_steady_temperature: no periodic steady state after iteration cap");
}

}  // namespace otk::opbt
