#include <doctest.h>

#include <cmath>
#include <vector>

#include "starkhole/errors.hpp"
#include "starkhole/lineshape.hpp"
#include "starkhole/mc.hpp"
#include "starkhole/stark.hpp"

using namespace starkhole;

TEST_CASE("sample_shift at zero broadening is exactly zero") {
    CounterRng rng(7, 0);
    for (int i = 0; i < 32; ++i) CHECK(sample_shift(0.0, rng) == 0.0);
}

TEST_CASE("sampled shifts have the analytic moments") {
    // E[s] = 0 by symmetry; E|s| = E[f]*E|c| = (f_bar/sqrt(pi)) since the
    // Maxwell mean is 2*f_bar/sqrt(pi) and E|c| = 1/2.
    const double f_bar = 1.7;
    const std::size_t n = 400000;
    double sum = 0.0, sum_abs = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(11, i);
        const double s = sample_shift(f_bar, rng);
        sum += s;
        sum_abs += std::fabs(s);
        sum_sq += s * s;
    }
    const double mean = sum / n;
    const double mean_abs = sum_abs / n;
    const double sd = std::sqrt(sum_sq / n);
    CHECK(std::fabs(mean) < 4.0 * sd / std::sqrt(double(n)));
    const double expect_abs = f_bar / std::sqrt(kPi);
    CHECK(std::fabs(mean_abs - expect_abs) < 4.0 * sd / std::sqrt(double(n)));
}

TEST_CASE("zero broadening reproduces the Lorentzian with zero variance") {
    EnsembleSpec spec;
    spec.n_samples = 1000;
    spec.f_bar = 0.0;
    spec.seed = 1;
    spec.x_grid = {0.0, 0.5, 2.0};
    const auto p = mc_hole_shape(spec);
    for (std::size_t k = 0; k < p.x.size(); ++k) {
        CHECK(p.mean[k] == lorentzian_unit(p.x[k]));
        CHECK(p.std_error[k] == 0.0);
    }
}

TEST_CASE("oracle agrees with quadrature at the hole center") {
    EnsembleSpec spec;
    spec.n_samples = 1000000;
    spec.f_bar = 2.0;
    spec.seed = 1;
    spec.x_grid = {0.0};
    const auto p = mc_hole_shape(spec);
    const double h0 = hole_shape(0.0, 2.0);
    CHECK(std::fabs(p.mean[0] - h0) < 3.0 * p.std_error[0]);

    spec.f_bar = 1.0;
    spec.n_samples = 200000;
    const auto q = mc_hole_shape(spec);
    CHECK(std::fabs(q.mean[0] - hole_shape(0.0, 1.0)) < 3.0 * q.std_error[0]);
}

TEST_CASE("worker count does not change a single bit") {
    EnsembleSpec spec;
    spec.n_samples = 30000;  // spans several reduction blocks
    spec.f_bar = 1.3;
    spec.seed = 99;
    spec.x_grid = {-2.0, -0.5, 0.0, 0.5, 2.0};

    spec.n_workers = 1;
    const auto serial = mc_hole_shape(spec);
    spec.n_workers = 3;
    const auto threaded = mc_hole_shape(spec);
    spec.n_workers = 0;
    const auto elastic = mc_hole_shape(spec);

    for (std::size_t k = 0; k < spec.x_grid.size(); ++k) {
        CHECK(serial.mean[k] == threaded.mean[k]);
        CHECK(serial.std_error[k] == threaded.std_error[k]);
        CHECK(serial.mean[k] == elastic.mean[k]);
    }
}

TEST_CASE("same spec, same draws") {
    EnsembleSpec spec;
    spec.n_samples = 5000;
    spec.f_bar = 0.8;
    spec.seed = 12345;
    spec.x_grid = {0.0, 1.0};
    const auto a = mc_hole_shape(spec);
    const auto b = mc_hole_shape(spec);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);

    spec.seed = 12346;
    const auto c = mc_hole_shape(spec);
    CHECK(a.mean != c.mean);
}

TEST_CASE("ensemble spec validation") {
    EnsembleSpec spec;
    spec.n_samples = 0;
    spec.x_grid = {0.0};
    CHECK_THROWS_AS(mc_hole_shape(spec), DomainError);
    spec.n_samples = 10;
    spec.x_grid = {};
    CHECK_THROWS_AS(mc_hole_shape(spec), DomainError);
    spec.x_grid = {0.0};
    spec.f_bar = -1.0;
    CHECK_THROWS_AS(mc_hole_shape(spec), DomainError);
}

TEST_CASE("histogram fwhm of sampled shifts matches hole_fwhm within 2 percent") {
    // Convolve the sampled shift distribution into the averaged-Lorentzian
    // profile on a fine grid, then read off the width by linear crossing.
    EnsembleSpec spec;
    spec.n_samples = 400000;
    spec.f_bar = 1.0;
    spec.seed = 5;
    const double xmax = 6.0;
    const int n_pts = 481;
    for (int i = 0; i < n_pts; ++i)
        spec.x_grid.push_back(-xmax + 2.0 * xmax * i / (n_pts - 1));
    const auto p = mc_hole_shape(spec);

    const double half = p.mean[n_pts / 2] / 2.0;
    double x_half = 0.0;
    for (int i = n_pts / 2; i + 1 < n_pts; ++i) {
        if (p.mean[i] >= half && p.mean[i + 1] < half) {
            const double t = (p.mean[i] - half) / (p.mean[i] - p.mean[i + 1]);
            x_half = p.x[i] + t * (p.x[i + 1] - p.x[i]);
            break;
        }
    }
    const double fwhm_mc = 2.0 * x_half;
    CHECK(std::fabs(fwhm_mc - hole_fwhm(1.0)) < 0.02 * hole_fwhm(1.0));
}
