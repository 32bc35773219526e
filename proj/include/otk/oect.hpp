#pragma once

#include "otk/errors.hpp"

namespace otk::oect {

// Two-sub-circuit description of an organic electro-chemical transistor:
// an ionic RC path charging the channel volume and an electronic resistor
// chain carrying the drain current.
struct OectParams {
    double mobility = 1e-5;     // hole mobility (m^2/Vs)
    double p0 = 1e26;           // initial volumetric doping density (1/m^3)
    double t_osc = 100e-9;      // semiconductor film thickness (m)
    double width = 1e-3;        // channel width (m)
    double length = 10e-6;      // channel length (m)
    double c_d = 1e-2;          // volumetric double-layer capacitance per area (F/m^2)
    double f_nonuniform = 0.5;  // spatial de-doping non-uniformity factor, in [0,1]
    double gate_distance = 1e-4;  // electrolyte path length l (m)
    double kappa_ionic = 1.0;   // tau_i calibration, s*(mol/l)^(1/2)/m

    void validate() const;
};

struct ElectrolyteSpec {
    double concentration = 0.1;  // mol/l
    int valence = 1;             // ion charge number z
    double temperature = 293.15; // K

    void validate() const;
};

struct TimeConstants {
    double tau_e = 0.0;  // electronic transit time (s)
    double tau_i = 0.0;  // ionic RC time (s)
};

/// Pinch-off voltage V_P = e*p0*t_osc/c_d.
[[nodiscard]] double pinch_off_voltage(const OectParams& p);

// Steady-state drain current in the depletion-mode convention:
//   V_DS <= V_GS:  G0*[1 - (V_GS - V_DS/2)/V_P]*V_DS
//   V_DS  > V_GS:  G0*[V_DS - V_GS^2/(2*V_P)]
// with G0 = mobility*e*p0*t_osc*W/L; the branches agree at V_DS = V_GS.
[[nodiscard]] double steady_state_current(const OectParams& p, double v_gs, double v_ds);

// Transient response after a gate step:
// I(t) = i_ss + delta_i_ss*(1 - f*tau_e/tau_i)*exp(-t/tau_i).
[[nodiscard]] double transient_current(const OectParams& p, double t, double i_ss,
                                       double delta_i_ss, double tau_e, double tau_i);

enum class TransientRegime { monotone, flat, spike };

// Sign analysis of the transient prefactor (1 - f*tau_e/tau_i): below 1 the
// drain current settles monotonically, above 1 it overshoots on the opposite
// side of the steady state (spike-then-recover), at exactly 1 it is flat.
[[nodiscard]] TransientRegime transient_regime(const OectParams& p, double tau_e, double tau_i);

// tau_e = L^2/(mobility*|v_ds|), tau_i = kappa_ionic*l/sqrt(concentration).
// Throws DomainError for v_ds == 0.
[[nodiscard]] TimeConstants time_constants(const OectParams& p, double v_ds,
                                           const ElectrolyteSpec& electrolyte);

/// Nernst shift: e_f0 + (k_B*T/(z*e))*ln(activity_ratio), everything in eV/V.
[[nodiscard]] double nernst_potential(double e_f0_ev, const ElectrolyteSpec& electrolyte,
                                      double activity_ratio);

/// Sensing line v_ref - slope*log10(c/c_ref); slope in V/decade.
[[nodiscard]] double turn_off_voltage(double c, double slope, double v_ref, double c_ref);

}  // namespace otk::oect
