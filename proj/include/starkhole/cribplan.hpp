#pragma once

// Field planning for controlled reversible inhomogeneous broadening:
// how much field does a target storage bandwidth require, and the
// polarity-reversal schedule that undoes it.

#include <vector>

#include "starkhole/stark.hpp"

namespace starkhole {

struct CribTarget {
    double bandwidth_mhz = 0.0;
    MediumModel medium;
    HoleWidth gamma{1.0};  // zero-field hole HWHM; used by the amorphous plan

    static CribTarget from_bandwidth(double mhz, MediumModel medium, HoleWidth gamma);
    static CribTarget from_duration(double ns, MediumModel medium, HoleWidth gamma);

    void validate() const;
};

// Pulse-bandwidth convention: B[MHz] = 1000 / duration[ns].
double bandwidth_from_duration(double duration_ns);

// Position-dependent gradient spanning -e_max..+e_max across the crystal,
// sized so the total shift span equals the bandwidth.
struct CrystalFieldPlan {
    double e_max_v_per_cm = 0.0;
    double bandwidth_mhz = 0.0;
    // total Stark span 2*kappa*e_max, for inverse-consistency checks
    double span_mhz(const StarkCoefficient& kappa) const {
        return 2.0 * kappa.khz_per_v_cm * e_max_v_per_cm * 1e-3;
    }
};

// Homogeneous field sized so the broadened-hole FWHM reaches the bandwidth.
struct AmorphousFieldPlan {
    double e_v_per_cm = 0.0;
    double bandwidth_mhz = 0.0;
    double f_bar = 0.0;  // broadening parameter at the planned field
};

CrystalFieldPlan crystal_field_plan(const CribTarget& target);
AmorphousFieldPlan amorphous_field_plan(const CribTarget& target);

// Two-phase polarity schedule: +plan until t_switch, -plan afterwards.
struct FieldPhase {
    double t_start_s;
    double polarity;  // multiplies the plan's field(s)
};

struct FieldSchedule {
    double amplitude_v_per_cm = 0.0;
    bool gradient = false;  // true: spatial ramp -E..+E; false: homogeneous
    std::vector<FieldPhase> phases;
};

FieldSchedule polarity_reversal_map(const CrystalFieldPlan& plan, double t_switch_s);
FieldSchedule polarity_reversal_map(const AmorphousFieldPlan& plan, double t_switch_s);

}  // namespace starkhole
