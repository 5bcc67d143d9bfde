#pragma once

// Shared numeric primitives: adaptive panel quadrature and bracketing
// root finders. No state, deterministic for identical inputs.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "starkhole/errors.hpp"

namespace starkhole {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

namespace detail {

// Gauss-Legendre abscissae/weights on [-1, 1]. The 15-point rule supplies
// the value, the 7-point rule the error estimate |G15 - G7|.
struct GaussNode {
    double x;
    double w;
};

inline constexpr std::array<GaussNode, 7> kGauss7{{
    {-0.9491079123427585245, 0.1294849661688696933},
    {-0.7415311855993944399, 0.2797053914892766679},
    {-0.4058451513773971669, 0.381830050505118945},
    {0.0, 0.4179591836734693878},
    {0.4058451513773971669, 0.381830050505118945},
    {0.7415311855993944399, 0.2797053914892766679},
    {0.9491079123427585245, 0.1294849661688696933},
}};

inline constexpr std::array<GaussNode, 15> kGauss15{{
    {-0.9879925180204854285, 0.03075324199611726835},
    {-0.9372733924007059043, 0.07036604748810812471},
    {-0.8482065834104272162, 0.107159220467171935},
    {-0.7244177313601700474, 0.1395706779261543144},
    {-0.5709721726085388475, 0.1662692058169939336},
    {-0.3941513470775633699, 0.186161000015562211},
    {-0.2011940939974345223, 0.1984314853271115765},
    {0.0, 0.2025782419255612729},
    {0.2011940939974345223, 0.1984314853271115765},
    {0.3941513470775633699, 0.186161000015562211},
    {0.5709721726085388475, 0.1662692058169939336},
    {0.7244177313601700474, 0.1395706779261543144},
    {0.8482065834104272162, 0.107159220467171935},
    {0.9372733924007059043, 0.07036604748810812471},
    {0.9879925180204854285, 0.03075324199611726835},
}};

struct Panel {
    double a, b;
    double value;
    double error;
};

template <class F>
Panel evaluate_panel(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double g15 = 0.0;
    for (const auto& n : kGauss15) g15 += n.w * f(mid + half * n.x);
    double g7 = 0.0;
    for (const auto& n : kGauss7) g7 += n.w * f(mid + half * n.x);
    g15 *= half;
    g7 *= half;
    return {a, b, g15, std::fabs(g15 - g7)};
}

}  // namespace detail

// Adaptive quadrature of f over [a, b]: bisect the worst panel until the
// summed error estimate meets max(abs_tol, rel_tol*|value|). Throws
// QuadratureError (with the achieved estimate) if the panel budget runs out.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                    double abs_tol = 0.0, int max_panels = 4000) {
    if (a == b) return {0.0, 0.0, 0};

    auto worse = [](const detail::Panel& p, const detail::Panel& q) { return p.error < q.error; };
    std::priority_queue<detail::Panel, std::vector<detail::Panel>, decltype(worse)> panels(worse);

    detail::Panel whole = detail::evaluate_panel(f, a, b);
    double total = whole.value;
    double err = whole.error;
    panels.push(whole);
    int n_panels = 1;

    while (err > std::max(abs_tol, rel_tol * std::fabs(total))) {
        if (n_panels >= max_panels) {
            const double achieved = err / std::max(std::fabs(total), std::numeric_limits<double>::min());
            throw QuadratureError("adaptive quadrature: panel budget exhausted", achieved, rel_tol);
        }
        detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval no longer splittable in double precision
            const double achieved = err / std::max(std::fabs(total), std::numeric_limits<double>::min());
            throw QuadratureError("adaptive quadrature: interval exhausted", achieved, rel_tol);
        }
        detail::Panel left = detail::evaluate_panel(f, worst.a, mid);
        detail::Panel right = detail::evaluate_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++n_panels;
    }
    return {total, err, n_panels};
}

// Brent-style bracketing root finder for a continuous f with f(a)*f(b) <= 0.
template <class F>
double brent_root(F&& f, double a, double b, double xtol = 1e-13, double rtol = 1e-13,
                  int max_iter = 200) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw Error("brent_root: root not bracketed");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) +
                           std::max(xtol, rtol * std::fabs(b));
        const double m = 0.5 * (c - b);
        if (std::fabs(m) <= tol || fb == 0.0) return b;

        if (std::fabs(e) < tol || std::fabs(fa) <= std::fabs(fb)) {
            d = e = m;  // bisection
        } else {
            double p, q;
            const double s = fb / fa;
            if (a == c) {  // secant
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {  // inverse quadratic
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = e = m;
            }
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
    }
    return b;
}

}  // namespace starkhole
