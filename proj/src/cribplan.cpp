#include "starkhole/cribplan.hpp"

#include <cmath>

#include "starkhole/errors.hpp"
#include "starkhole/lineshape.hpp"
#include "starkhole/numerics.hpp"

namespace starkhole {

double bandwidth_from_duration(double duration_ns) {
    if (!(duration_ns > 0.0)) throw DomainError("pulse duration must be > 0");
    return 1000.0 / duration_ns;
}

CribTarget CribTarget::from_bandwidth(double mhz, MediumModel medium, HoleWidth gamma) {
    CribTarget t;
    t.bandwidth_mhz = mhz;
    t.medium = std::move(medium);
    t.gamma = gamma;
    t.validate();
    return t;
}

CribTarget CribTarget::from_duration(double ns, MediumModel medium, HoleWidth gamma) {
    return from_bandwidth(bandwidth_from_duration(ns), std::move(medium), gamma);
}

void CribTarget::validate() const {
    if (!(bandwidth_mhz > 0.0)) throw DomainError("target bandwidth must be > 0");
    if (!(gamma.gamma_mhz > 0.0)) throw DomainError("hole width must be > 0");
}

CrystalFieldPlan crystal_field_plan(const CribTarget& target) {
    target.validate();
    if (is_amorphous(target.medium))
        throw DomainError("crystal_field_plan: medium is not a crystal");
    const double kappa = medium_kappa(target.medium).khz_per_v_cm;
    if (kappa == 0.0) throw DomainError("crystal_field_plan: kappa is zero");

    CrystalFieldPlan plan;
    plan.bandwidth_mhz = target.bandwidth_mhz;
    // shift span 2*kappa*E_max (kHz) must equal the bandwidth (MHz)
    plan.e_max_v_per_cm = 1000.0 * target.bandwidth_mhz / (2.0 * std::fabs(kappa));
    return plan;
}

AmorphousFieldPlan amorphous_field_plan(const CribTarget& target) {
    target.validate();
    if (!is_amorphous(target.medium))
        throw DomainError("amorphous_field_plan: medium is not amorphous");
    const double kappa = std::fabs(medium_kappa(target.medium).khz_per_v_cm);
    if (kappa == 0.0) throw DomainError("amorphous_field_plan: kappa is zero");

    const double gamma = target.gamma.gamma_mhz;
    const double zero_field_fwhm = 2.0 * gamma;
    if (target.bandwidth_mhz < zero_field_fwhm)
        throw NoSolutionError(
            "amorphous_field_plan: target bandwidth is below the zero-field hole width");

    auto f_bar_at = [&](double e) { return kappa * e * 1e-3 / gamma; };
    auto width_gap = [&](double e) {
        return gamma * hole_fwhm(f_bar_at(e)) - target.bandwidth_mhz;
    };

    AmorphousFieldPlan plan;
    plan.bandwidth_mhz = target.bandwidth_mhz;

    double hi = 1000.0 * target.bandwidth_mhz / kappa;  // shift scale = bandwidth
    int guard = 0;
    while (width_gap(hi) < 0.0) {
        hi *= 2.0;
        if (++guard > 60) throw NoSolutionError("amorphous_field_plan: bracket expansion failed");
    }
    plan.e_v_per_cm = brent_root(width_gap, 0.0, hi, 0.0, 1e-9, 200);
    plan.f_bar = f_bar_at(plan.e_v_per_cm);
    return plan;
}

namespace {

FieldSchedule two_phase(double amplitude, bool gradient, double t_switch_s) {
    if (!(t_switch_s >= 0.0)) throw DomainError("switch time must be >= 0");
    FieldSchedule s;
    s.amplitude_v_per_cm = amplitude;
    s.gradient = gradient;
    s.phases = {{0.0, +1.0}, {t_switch_s, -1.0}};
    return s;
}

}  // namespace

FieldSchedule polarity_reversal_map(const CrystalFieldPlan& plan, double t_switch_s) {
    return two_phase(plan.e_max_v_per_cm, true, t_switch_s);
}

FieldSchedule polarity_reversal_map(const AmorphousFieldPlan& plan, double t_switch_s) {
    return two_phase(plan.e_v_per_cm, false, t_switch_s);
}

}  // namespace starkhole
