#include "otk/oect.hpp"

#include <cmath>

#include "otk/constants.hpp"

namespace otk::oect {

void OectParams::validate() const {
    if (!(mobility > 0.0)) throw DomainError("oect: mobility must be > 0");
    if (!(p0 > 0.0)) throw DomainError("oect: p0 must be > 0");
    if (!(t_osc > 0.0)) throw DomainError("oect: t_osc must be > 0");
    if (!(width > 0.0)) throw DomainError("oect: width must be > 0");
    if (!(length > 0.0)) throw DomainError("oect: length must be > 0");
    if (!(c_d > 0.0)) throw DomainError("oect: c_d must be > 0");
    if (!(f_nonuniform >= 0.0 && f_nonuniform <= 1.0)) {
        throw DomainError("oect: f_nonuniform must be in [0,1]");
    }
    if (!(gate_distance > 0.0)) throw DomainError("oect: gate_distance must be > 0");
    if (!(kappa_ionic > 0.0)) throw DomainError("oect: kappa_ionic must be > 0");
}

void ElectrolyteSpec::validate() const {
    if (!(concentration > 0.0)) throw DomainError("electrolyte: concentration must be > 0");
    if (valence == 0) throw DomainError("electrolyte: valence must be nonzero");
    if (!(temperature > 0.0)) throw DomainError("electrolyte: temperature must be > 0");
}

double pinch_off_voltage(const OectParams& p) {
    return constants::elementary_charge * p.p0 * p.t_osc / p.c_d;
}

double steady_state_current(const OectParams& p, double v_gs, double v_ds) {
    const double v_p = pinch_off_voltage(p);
    const double g0 = p.mobility * constants::elementary_charge * p.p0 * p.t_osc *
                      p.width / p.length;
    if (v_ds <= v_gs) {
        return g0 * (1.0 - (v_gs - 0.5 * v_ds) / v_p) * v_ds;
    }
    return g0 * (v_ds - v_gs * v_gs / (2.0 * v_p));
}

double transient_current(const OectParams& p, double t, double i_ss, double delta_i_ss,
                         double tau_e, double tau_i) {
    if (!(tau_e > 0.0) || !(tau_i > 0.0)) {
        throw DomainError("transient_current: time constants must be > 0");
    }
    if (t < 0.0) throw DomainError("transient_current: t must be >= 0");
    return i_ss + delta_i_ss * (1.0 - p.f_nonuniform * tau_e / tau_i) * std::exp(-t / tau_i);
}

TransientRegime transient_regime(const OectParams& p, double tau_e, double tau_i) {
    if (!(tau_e > 0.0) || !(tau_i > 0.0)) {
        throw DomainError("transient_regime: time constants must be > 0");
    }
    const double prefactor = 1.0 - p.f_nonuniform * tau_e / tau_i;
    if (prefactor > 0.0) return TransientRegime::monotone;
    if (prefactor < 0.0) return TransientRegime::spike;
    return TransientRegime::flat;
}

TimeConstants time_constants(const OectParams& p, double v_ds, const ElectrolyteSpec& electrolyte) {
    if (v_ds == 0.0) throw DomainError("time_constants: v_ds must be nonzero");
    electrolyte.validate();
    TimeConstants tc;
    tc.tau_e = p.length * p.length / (p.mobility * std::abs(v_ds));
    tc.tau_i = p.kappa_ionic * p.gate_distance / std::sqrt(electrolyte.concentration);
    return tc;
}

double nernst_potential(double e_f0_ev, const ElectrolyteSpec& electrolyte, double activity_ratio) {
    if (!(activity_ratio > 0.0)) {
        throw DomainError("nernst_potential: activity_ratio must be > 0");
    }
    electrolyte.validate();
    const double kt_over_e = constants::thermal_voltage(electrolyte.temperature);
    return e_f0_ev + kt_over_e / static_cast<double>(electrolyte.valence) * std::log(activity_ratio);
}

double turn_off_voltage(double c, double slope, double v_ref, double c_ref) {
    if (!(c > 0.0) || !(c_ref > 0.0)) {
        throw DomainError("turn_off_voltage: concentrations must be > 0");
    }
    return v_ref - slope * std::log10(c / c_ref);
}

}  // namespace otk::oect
