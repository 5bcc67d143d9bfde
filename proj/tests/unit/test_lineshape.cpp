#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "starkhole/errors.hpp"
#include "starkhole/lineshape.hpp"
#include "starkhole/stark.hpp"

using namespace starkhole;

// Reference values computed independently (mpmath quadrature of the
// defining integral at 30 significant digits).
TEST_CASE("hole shape reference values") {
    CHECK(hole_shape(0.0, 0.25) == doctest::Approx(0.309174667775007).epsilon(1e-7));
    CHECK(hole_shape(0.0, 1.0) == doctest::Approx(0.241238199763205).epsilon(1e-7));
    CHECK(hole_shape(0.0, 2.0) == doctest::Approx(0.173683039442291).epsilon(1e-7));
    CHECK(hole_shape(0.0, 4.0) == doctest::Approx(0.108655374487951).epsilon(1e-7));
    CHECK(hole_shape(0.5, 1.0) == doctest::Approx(0.220730159632795).epsilon(1e-7));
    CHECK(hole_shape(1.0, 1.0) == doctest::Approx(0.171933506252489).epsilon(1e-7));
    CHECK(hole_shape(3.0, 1.0) == doctest::Approx(0.036851609566973).epsilon(1e-7));
}

TEST_CASE("zero broadening returns the analytic Lorentzian exactly") {
    for (double x : {0.0, 0.3, 1.0, 7.5, -2.0}) {
        CHECK(hole_shape(x, 0.0) == lorentzian_unit(x));
    }
    CHECK(hole_shape(0.0, 0.0) == 1.0 / kPi);
    // below the documented threshold the analytic branch is taken too
    CHECK(hole_shape(0.7, 0.5 * kLorentzianLimitFbar) == lorentzian_unit(0.7));
}

TEST_CASE("small-broadening limit stays within 1e-6 of the Lorentzian") {
    double sup = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = -10.0 + 20.0 * i / 400.0;
        sup = std::max(sup, std::fabs(hole_shape(x, 1e-3) - lorentzian_unit(x)));
    }
    CHECK(sup < 1e-6);
}

TEST_CASE("hole shape is even in x") {
    for (double x : {0.5, 1.0, 3.0, 0.123, 6.78}) {
        const double hp = hole_shape(x, 1.0);
        const double hm = hole_shape(-x, 1.0);
        CHECK(std::fabs(hp - hm) < kDefaultRelTol * hp);
    }
}

TEST_CASE("angle kernel passes continuously through the branch split") {
    for (double x : {0.0, 0.5, 1.0, 3.0}) {
        const double fs = std::sqrt(1.0 + x * x);
        const double lo = hole_kernel_angle(fs - 1e-10, x);
        const double hi = hole_kernel_angle(fs + 1e-10, x);
        CHECK(std::fabs(lo - hi) < 1e-9);
        CHECK(std::fabs(lo - kPi / 2.0) < 1e-9);
    }
}

TEST_CASE("curve wrapper") {
    HoleShapeQuery q0{{0.0}, 0.0, kDefaultRelTol};
    const auto v0 = hole_shape_curve(q0);
    REQUIRE(v0.size() == 1);
    CHECK(v0[0] == 1.0 / kPi);

    HoleShapeQuery qsym{{-3.0, -1.0, -0.25, 0.0, 0.25, 1.0, 3.0}, 1.0, kDefaultRelTol};
    const auto v = hole_shape_curve(qsym);
    REQUIRE(v.size() == qsym.x_values.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(v[i] == doctest::Approx(v[v.size() - 1 - i]).epsilon(1e-7));
    }

    HoleShapeQuery bad{{}, 1.0, kDefaultRelTol};
    CHECK_THROWS_AS(hole_shape_curve(bad), DomainError);
    HoleShapeQuery bad_tol{{0.0}, 1.0, 0.5};
    CHECK_THROWS_AS(hole_shape_curve(bad_tol), DomainError);
}

TEST_CASE("trapezoid area with analytic tail is 1 within 1e-4") {
    // |x| > 200 contributes (2/pi)*atan(1/200) up to O(f_bar^2/X^2) corrections
    const double step = 0.05;
    const int n = static_cast<int>(std::lround(400.0 / step));
    HoleShapeQuery q;
    q.f_bar = 5.0;
    q.rel_tol = 1e-7;
    q.x_values.reserve(n + 1);
    for (int i = 0; i <= n; ++i) q.x_values.push_back(-200.0 + step * i);
    const auto h = hole_shape_curve(q);
    double area = 0.0;
    for (int i = 0; i < n; ++i) area += 0.5 * step * (h[i] + h[i + 1]);
    area += 2.0 / kPi * std::atan(1.0 / 200.0);
    CHECK(std::fabs(area - 1.0) < 1e-4);
}

TEST_CASE("hole fwhm reference values") {
    CHECK(hole_fwhm(0.0) == 2.0);
    CHECK(hole_fwhm(0.5) == doctest::Approx(2.318429858910).epsilon(1e-9));
    CHECK(hole_fwhm(1.0) == doctest::Approx(2.976958063699).epsilon(1e-9));
    CHECK(hole_fwhm(2.0) == doctest::Approx(4.526391097469).epsilon(1e-9));
    CHECK(hole_fwhm(5.0) == doctest::Approx(9.444424741255).epsilon(1e-9));
    CHECK(hole_fwhm(10.5) == doctest::Approx(18.574523569791).epsilon(1e-9));
}

TEST_CASE("hole fwhm grows with broadening") {
    CHECK(hole_fwhm(2.0) > hole_fwhm(1.0));
    CHECK(hole_fwhm(1.0) > hole_fwhm(0.5));
    CHECK(hole_fwhm(0.5) > hole_fwhm(0.0));
}
