#pragma once

// Broadened spectral-hole shape h(x; f_bar): the orientation- and
// magnitude-averaged hole profile of an amorphous host under a DC field,
// evaluated by adaptive quadrature. x is detuning in units of the
// zero-field HWHM, f_bar the dimensionless broadening parameter.

#include <numbers>
#include <vector>

#include "starkhole/errors.hpp"

namespace starkhole {

// Below this f_bar the shape is returned as the analytic zero-field
// Lorentzian; the 1/f_bar^3 prefactor makes direct quadrature
// ill-conditioned there.
inline constexpr double kLorentzianLimitFbar = 1e-4;

inline constexpr double kDefaultRelTol = 1e-8;

// Unit-area Lorentzian of HWHM 1 — the f_bar -> 0 limit of h.
inline double lorentzian_unit(double x) {
    return 1.0 / (std::numbers::pi * (1.0 + x * x));
}

// Angle kernel of the hole-shape integrand. Equals the two-branch
// arctan(2f/(1-f^2+x^2)) expression of the defining integral, with the
// +pi branch above f = sqrt(1+x^2) folded in: atan2 passes continuously
// through the split where 1-f^2+x^2 changes sign.
double hole_kernel_angle(double f, double x);

// h(x) for broadening f_bar >= 0, to relative tolerance rel_tol.
// Normalized: integral over x of h is 1. Even in x.
double hole_shape(double x, double f_bar, double rel_tol = kDefaultRelTol);

struct HoleShapeQuery {
    std::vector<double> x_values;
    double f_bar = 0.0;
    double rel_tol = kDefaultRelTol;

    void validate() const;
};

// Pointwise hole_shape over the query grid.
std::vector<double> hole_shape_curve(const HoleShapeQuery& query);

// Full width at half maximum of h(.; f_bar), in x-units.
// 2 at f_bar = 0, strictly increasing in f_bar.
double hole_fwhm(double f_bar);

}  // namespace starkhole
