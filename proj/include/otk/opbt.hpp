#pragma once

#include <vector>

#include "otk/errors.hpp"

namespace otk::opbt {

// Zero-dimensional electrothermal model of a vertical organic transistor:
// power-law IV with Arrhenius-activated conductivity, heat removed through a
// temperature-independent substrate thermal resistance.
struct OpbtThermalParams {
    double i_ref = 1e-3;      // current at (v_ref, t_ambient) (A)
    double v_ref = 1.0;       // reference voltage (V)
    double alpha = 2.0;       // power-law exponent, >= 1
    double i_off = 0.0;       // off-state current at t_ambient (A)
    double e_act_on = 0.3;    // activation energy of the on-state factor F1 (eV)
    double e_act_off = 0.3;   // activation energy of the off-state factor F2 (eV)
    double theta_th = 0.0;    // substrate thermal resistance (K/W)
    double t_ambient = 293.15;  // K

    // Steady-state solver settings.
    double t_max = 600.0;     // runaway ceiling for voltage-controlled roots (K)
    int grid_points = 2000;   // bracketing grid resolution on [t_ambient, t_max]

    void validate() const;
};

struct OperatingPoint {
    double voltage = 0.0;      // V
    double current = 0.0;      // A
    double temperature = 0.0;  // K
    bool stable = true;        // heat-balance slope criterion
};

struct PulseSpec {
    double pulse_width = 1e-3;        // s
    double duty_cycle = 1.0;          // in (0, 1]
    double thermal_capacitance = 1e-6;  // J/K

    void validate() const;
};

/// Arrhenius factor exp(-(e_act/k_B)(1/t - 1/t_ambient)); e_act in eV.
[[nodiscard]] double activation_factor(double e_act_ev, double t, double t_ambient);

/// I(V,T) = i_ref*(v/v_ref)^alpha*F1(T) + i_off*F2(T). Requires v >= 0.
[[nodiscard]] double current_at(const OpbtThermalParams& p, double v, double t);

// All solutions of T = T_a + Theta_th*V*I(V,T) on [t_ambient, t_max], found by
// sign-change bracketing on a dense grid plus bisection, each labeled by the
// sign of d(dissipated - removed)/dT. Ascending in temperature.
// Throws NumericError when no root exists below t_max (thermal runaway).
[[nodiscard]] std::vector<OperatingPoint> solve_steady_state(const OpbtThermalParams& p,
                                                             double v);

// Current-controlled sweep: for each I solves the coupled pair
// {I = I(V,T), T = T_a + Theta_th*V*I} for the unique V, tracing the full
// curve including any branch with dV/dI < 0.
[[nodiscard]] std::vector<OperatingPoint> trace_current_controlled(
    const OpbtThermalParams& p, const std::vector<double>& currents);

// Periodic steady-state peak temperature of the single-pole thermal network
// (theta_th, thermal_capacitance) under pulsed bias: time-stepped periods
// until the peak changes by less than 1e-6 K per period.
// Throws NumericError on thermal runaway within a pulse.
[[nodiscard]] double pulsed_steady_temperature(const OpbtThermalParams& p,
                                               const PulseSpec& pulse, double v);

}  // namespace otk::opbt
