#include "starkhole/lineshape.hpp"

#include <algorithm>
#include <cmath>

#include "starkhole/numerics.hpp"
#include "starkhole/stark.hpp"

namespace starkhole {

namespace {

// Beyond u = f/f_bar = 9.3 the Gaussian weight exp(-u^2) is < 3e-38;
// nothing survives in double precision.
constexpr double kGaussianCut = 9.3;

// Tail allowance past the branch point, in units of f_bar; the Gaussian
// factor there is below e^-64 relative to the branch point.
constexpr double kTailWidths = 8.0;

}  // namespace

double hole_kernel_angle(double f, double x) {
    return std::atan2(2.0 * f, 1.0 - f * f + x * x);
}

double hole_shape(double x, double f_bar, double rel_tol) {
    if (!(f_bar >= 0.0)) throw DomainError("hole_shape: f_bar must be >= 0");
    if (!(rel_tol > 0.0) || rel_tol > 1e-2)
        throw DomainError("hole_shape: rel_tol must lie in (0, 1e-2]");
    if (!std::isfinite(x)) throw DomainError("hole_shape: x must be finite");

    if (f_bar < kLorentzianLimitFbar) return lorentzian_unit(x);

    // Substitute u = f/f_bar so the Gaussian weight is unit-scale for any
    // f_bar; one factor f_bar^2 of the prefactor cancels into du.
    const auto integrand = [f_bar, x](double u) {
        return u * std::exp(-u * u) * hole_kernel_angle(u * f_bar, x);
    };

    const double u_split = std::sqrt(1.0 + x * x) / f_bar;
    // Per-piece tolerance; the pieces are same-sign so errors add benignly.
    const double piece_tol = 0.5 * rel_tol;

    double integral;
    int panels = 0;
    if (u_split >= kGaussianCut) {
        auto r = integrate_adaptive(integrand, 0.0, kGaussianCut, piece_tol);
        integral = r.value;
        panels = r.panels;
    } else {
        auto lower = integrate_adaptive(integrand, 0.0, u_split, piece_tol);
        auto upper = integrate_adaptive(integrand, u_split, u_split + kTailWidths, piece_tol);
        integral = lower.value + upper.value;
        panels = lower.panels + upper.panels;
    }
    (void)panels;

    const double prefactor = 2.0 / (std::pow(kPi, 1.5) * f_bar);
    return prefactor * integral;
}

void HoleShapeQuery::validate() const {
    if (x_values.empty()) throw DomainError("hole shape query: empty x grid");
    for (double x : x_values)
        if (!std::isfinite(x)) throw DomainError("hole shape query: non-finite x");
    if (!(f_bar >= 0.0)) throw DomainError("hole shape query: f_bar must be >= 0");
    if (!(rel_tol > 0.0) || rel_tol > 1e-2)
        throw DomainError("hole shape query: rel_tol must lie in (0, 1e-2]");
}

std::vector<double> hole_shape_curve(const HoleShapeQuery& query) {
    query.validate();
    std::vector<double> out;
    out.reserve(query.x_values.size());
    for (double x : query.x_values) {
        try {
            out.push_back(hole_shape(x, query.f_bar, query.rel_tol));
        } catch (const QuadratureError& e) {
            throw QuadratureError("hole_shape_curve failed at x = " + std::to_string(x) +
                                      ": " + e.what(),
                                  e.achieved_rel_error, e.requested_rel_tol);
        }
    }
    return out;
}

double hole_fwhm(double f_bar) {
    if (!(f_bar >= 0.0)) throw DomainError("hole_fwhm: f_bar must be >= 0");
    if (f_bar < kLorentzianLimitFbar) return 2.0;

    constexpr double tol = 1e-10;
    const double half = 0.5 * hole_shape(0.0, f_bar, tol);

    // h is even and unimodal; bracket the half-maximum crossing outward
    // from the Lorentzian half-width.
    double lo = 0.0;
    double hi = 1.0 + f_bar;
    int guard = 0;
    while (hole_shape(hi, f_bar, tol) > half) {
        lo = hi;
        hi *= 1.6;
        if (++guard > 200) throw Error("hole_fwhm: failed to bracket half maximum");
    }
    const double x_half = brent_root(
        [f_bar, half](double x) { return hole_shape(x, f_bar, tol) - half; }, lo, hi, 1e-12,
        1e-12);
    return 2.0 * x_half;
}

}  // namespace starkhole
