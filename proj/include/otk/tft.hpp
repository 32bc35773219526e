#pragma once

#include <vector>

#include "otk/errors.hpp"

namespace otk::tft {

enum class Polarity { n_type, p_type };

// Gradual-channel compact model of a lateral thin-film transistor.
// All quantities strict SI; lab-unit conversion happens at the CLI boundary.
struct TftParams {
    double mobility = 1e-4;             // field-effect mobility (m^2/Vs)
    double c_ins = 1e-3;                // specific insulator capacitance (F/m^2)
    double width = 1e-3;                // channel width W (m)
    double length = 10e-6;              // channel length L (m)
    double v_th = 0.0;                  // threshold voltage (V)
    double overlap = 0.0;               // gate-source/drain overlap L_OV (m)
    double subthreshold_slope = 0.3;    // S (V/decade)
    Polarity polarity = Polarity::n_type;
    double temperature_k = 293.15;      // used only to validate S against the Boltzmann limit
    double stitch_overdrive = 1e-3;     // epsilon anchoring the subthreshold branch (V)

    // Throws DomainError when a field is outside its admissible range,
    // including S below the thermal limit k_B*T*ln(10)/e.
    void validate() const;
};

// Piecewise drain current: exponential subthreshold branch below V_th,
// gradual-channel linear branch for |V_DS| <= |V_GS - V_th|, saturation
// otherwise. Total over all voltages; polarity and source/drain exchange
// are handled by internal sign normalization.
[[nodiscard]] double drain_current(const TftParams& p, double v_gs, double v_ds);

// Analytic d(I_D)/d(V_GS) of the branch active at this bias.
[[nodiscard]] double transconductance(const TftParams& p, double v_gs, double v_ds);

/// Upper bound on the unity-current-gain frequency, g_m / (2*pi*C~*W*(L+2*L_OV)).
[[nodiscard]] double transition_frequency(const TftParams& p, double g_m);

/// Small-signal differential gain g_m / (2*pi*f*c_tot).
[[nodiscard]] double differential_gain(double g_m, double freq, double c_tot);

struct TlmPoint {
    double length = 0.0;   // channel length (m)
    double r_tot_w = 0.0;  // width-normalized total resistance (Ohm*m)
};

struct TlmResult {
    double r_c_w = 0.0;           // width-normalized contact resistance (Ohm*m)
    double transfer_length = 0.0; // L_T (m)
    double channel_slope = 0.0;   // d(R_tot*W)/dL (Ohm*m/m)
    double residual_norm = 0.0;   // sqrt(sum of squared fit residuals)
    bool physical = true;         // false when the fitted slope is not positive
};

// Transmission-line extraction: least-squares line of R_tot*W against L.
// Intercept at L=0 is the contact term, L_T = r_c_w / slope.
// Throws DomainError with fewer than two distinct channel lengths.
[[nodiscard]] TlmResult tlm_extract(const std::vector<TlmPoint>& points);

}  // namespace otk::tft
