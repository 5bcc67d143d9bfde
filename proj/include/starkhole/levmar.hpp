#pragma once

// Damped least squares (Levenberg-Marquardt) with numerically differenced
// Jacobians and box-bound projection. Small problems only (a handful of
// parameters); deterministic and single-threaded.

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace starkhole {

struct LevMarOptions {
    int max_iterations = 300;
    // Converged when both the actual and the model-predicted relative cost
    // reduction of an accepted step fall below ftol.
    double ftol = 1e-8;
    double xtol = 1e-12;   // relative step size considered converged
    double lambda0 = 1e-3;
    double fd_step = 1e-6;  // relative forward-difference step
    // Per-parameter absolute floor on the difference step (empty = 0).
    Eigen::VectorXd fd_step_min;
};

struct LevMarResult {
    Eigen::VectorXd params;
    // (J^T J)^-1 at the solution, J in residual-space (already weighted if
    // the residual function weights). Scale by s^2 for unweighted fits.
    Eigen::MatrixXd covariance;
    double cost = 0.0;  // sum of squared residuals
    bool converged = false;
    int iterations = 0;
    // Cost after every accepted step, starting with the initial cost.
    std::vector<double> cost_trace;
    std::vector<bool> at_lower;
    std::vector<bool> at_upper;
};

// residual_fn fills r with the m residuals at p (m fixed across calls).
using ResidualFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

LevMarResult levmar(const ResidualFn& residual_fn, Eigen::VectorXd p0,
                    const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                    int n_residuals, const LevMarOptions& options = {});

}  // namespace starkhole
