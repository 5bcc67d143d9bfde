#pragma once

// First-principles Monte-Carlo reconstruction of the broadened hole shape:
// per-ion linear Stark shifts with Maxwell-distributed dipole magnitudes and
// isotropic orientations, averaged as analytic unit-Lorentzians at the
// shifted centers. Serves as the verification oracle for the quadrature
// evaluation of the same shape.

#include <cstdint>
#include <vector>

#include "starkhole/rng.hpp"

namespace starkhole {

struct EnsembleSpec {
    std::size_t n_samples = 0;
    double f_bar = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> x_grid;
    // 0 = one worker per hardware thread. Output is bit-identical for any
    // worker count.
    int n_workers = 0;

    void validate() const;
};

struct McProfile {
    std::vector<double> x;
    std::vector<double> mean;       // estimate of h(x)
    std::vector<double> std_error;  // standard error of the mean
    std::size_t n_samples = 0;
};

// One dimensionless shift s = f*c: f Maxwell-distributed with mode f_bar,
// c uniform on [-1, 1] (isotropic 3-D orientation projected on the field).
double sample_shift(double f_bar, CounterRng& rng);

// Ensemble average of unit-Lorentzians centered on sampled shifts,
// evaluated on spec.x_grid, with per-point standard errors.
McProfile mc_hole_shape(const EnsembleSpec& spec);

}  // namespace starkhole
