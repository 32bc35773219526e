#include "otk/tft.hpp"

#include <cmath>
#include <limits>

#include "otk/constants.hpp"

namespace otk::tft {

namespace {

// Canonical branch evaluation: n-type convention, v_ds >= 0.
// Returns the current and (optionally) its derivative w.r.t. v_gs.
struct BranchEval {
    double current;
    double dI_dVgs;
};

BranchEval eval_canonical(const TftParams& p, double v_gs, double v_ds) {
    const double k = p.mobility * p.c_ins * p.width / p.length;
    const double vov = v_gs - p.v_th;

    if (vov < 0.0) {
        // Subthreshold: exponential with the configured decade slope,
        // anchored to the gradual-channel branch at a small overdrive so the
        // two regimes meet within the anchor scale.
        const double eps = p.stitch_overdrive;
        double anchor;
        if (v_ds <= eps) {
            anchor = k * (eps * v_ds - 0.5 * v_ds * v_ds);  // linear at the anchor bias
        } else {
            anchor = 0.5 * k * eps * eps;  // anchor bias sits in saturation
        }
        const double ln10 = 2.302585092994046;
        const double current = anchor * std::pow(10.0, vov / p.subthreshold_slope);
        return {current, current * ln10 / p.subthreshold_slope};
    }
    if (v_ds <= vov) {
        // Linear (triode) region
        return {k * (vov * v_ds - 0.5 * v_ds * v_ds), k * v_ds};
    }
    // Saturation region
    return {0.5 * k * vov * vov, k * vov};
}

// Sign normalization: polarity flip maps p-type onto the n-type convention;
// a source/drain exchange maps v_ds < 0 onto the canonical half-plane.
// I(v_gs, v_ds) = -I(v_gs - v_ds, -v_ds) for a symmetric device.
BranchEval eval_signed(const TftParams& p, double v_gs, double v_ds) {
    double sign = 1.0;
    if (p.polarity == Polarity::p_type) {
        v_gs = -v_gs;
        v_ds = -v_ds;
        sign = -sign;
    }
    if (v_ds < 0.0) {
        v_gs -= v_ds;
        v_ds = -v_ds;
        sign = -sign;
    }
    BranchEval e = eval_canonical(p, v_gs, v_ds);
    // d(v_gs_canonical)/d(v_gs_user) = +1 for every applied transform, and the
    // current sign flips cancel pairwise for p-type, so the chain-rule factor
    // on dI/dVgs equals the accumulated current sign except for the p-type
    // gate flip, which contributes -1.
    double gm_sign = sign;
    if (p.polarity == Polarity::p_type) gm_sign = -sign;
    return {sign * e.current, gm_sign * e.dI_dVgs};
}

}  // namespace

void TftParams::validate() const {
    if (!(mobility > 0.0)) throw DomainError("tft: mobility must be > 0");
    if (!(c_ins > 0.0)) throw DomainError("tft: c_ins must be > 0");
    if (!(width > 0.0)) throw DomainError("tft: width must be > 0");
    if (!(length > 0.0)) throw DomainError("tft: length must be > 0");
    if (overlap < 0.0) throw DomainError("tft: overlap must be >= 0");
    if (!(stitch_overdrive > 0.0)) throw DomainError("tft: stitch_overdrive must be > 0");
    if (!(temperature_k > 0.0)) throw DomainError("tft: temperature must be > 0");
    const double s_limit =
        constants::thermal_voltage(temperature_k) * std::log(10.0);
    if (!(subthreshold_slope >= s_limit)) {
        throw DomainError("tft: subthreshold_slope below the thermal limit kT*ln(10)/e");
    }
}

double drain_current(const TftParams& p, double v_gs, double v_ds) {
    return eval_signed(p, v_gs, v_ds).current;
}

double transconductance(const TftParams& p, double v_gs, double v_ds) {
    return eval_signed(p, v_gs, v_ds).dI_dVgs;
}

double transition_frequency(const TftParams& p, double g_m) {
    return g_m / (2.0 * constants::pi * p.c_ins * p.width * (p.length + 2.0 * p.overlap));
}

double differential_gain(double g_m, double freq, double c_tot) {
    if (!(freq > 0.0)) throw DomainError("differential_gain: frequency must be > 0");
    if (!(c_tot > 0.0)) throw DomainError("differential_gain: c_tot must be > 0");
    return g_m / (2.0 * constants::pi * freq * c_tot);
}

TlmResult tlm_extract(const std::vector<TlmPoint>& points) {
    if (points.size() < 2) {
        throw DomainError("tlm_extract: need at least two points");
    }
    const double n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const TlmPoint& q : points) {
        sx += q.length;
        sy += q.r_tot_w;
        sxx += q.length * q.length;
        sxy += q.length * q.r_tot_w;
    }
    const double det = n * sxx - sx * sx;
    // det == 0 iff all lengths coincide (rank-deficient design matrix).
    const double scale = sxx > 0.0 ? n * sxx : 1.0;
    if (!(det > scale * 1e-14)) {
        throw DomainError("tlm_extract: need at least two distinct channel lengths");
    }

    TlmResult r;
    r.channel_slope = (n * sxy - sx * sy) / det;
    r.r_c_w = (sy - r.channel_slope * sx) / n;
    r.physical = r.channel_slope > 0.0;
    r.transfer_length = r.physical ? r.r_c_w / r.channel_slope : 0.0;

    double ss = 0.0;
    for (const TlmPoint& q : points) {
        const double res = q.r_tot_w - (r.r_c_w + r.channel_slope * q.length);
        ss += res * res;
    }
    r.residual_norm = std::sqrt(ss);
    return r;
}

}  // namespace otk::tft
