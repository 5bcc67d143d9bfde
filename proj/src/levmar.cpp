#include "starkhole/levmar.hpp"

#include <cmath>
#include <limits>

#include "starkhole/errors.hpp"

namespace starkhole {

namespace {

Eigen::VectorXd clamp_to_bounds(Eigen::VectorXd p, const Eigen::VectorXd& lower,
                                const Eigen::VectorXd& upper) {
    for (Eigen::Index j = 0; j < p.size(); ++j) p[j] = std::clamp(p[j], lower[j], upper[j]);
    return p;
}

// Forward-difference Jacobian; steps stay inside the bounds by flipping
// direction at an upper bound.
void numeric_jacobian(const ResidualFn& f, const Eigen::VectorXd& p, const Eigen::VectorXd& r0,
                      const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                      const LevMarOptions& opt, Eigen::MatrixXd& J, Eigen::VectorXd& scratch) {
    const Eigen::Index n = p.size();
    for (Eigen::Index j = 0; j < n; ++j) {
        double step = opt.fd_step * std::max(std::fabs(p[j]), 1.0);
        if (opt.fd_step_min.size() == n) step = std::max(step, opt.fd_step_min[j]);
        Eigen::VectorXd pj = p;
        if (p[j] + step > upper[j] && p[j] - step >= lower[j]) step = -step;
        pj[j] = p[j] + step;
        f(pj, scratch);
        J.col(j) = (scratch - r0) / step;
    }
}

}  // namespace

LevMarResult levmar(const ResidualFn& residual_fn, Eigen::VectorXd p0,
                    const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                    int n_residuals, const LevMarOptions& opt) {
    const Eigen::Index n = p0.size();
    const Eigen::Index m = n_residuals;
    if (m < n) throw DomainError("levmar: fewer residuals than parameters");

    Eigen::VectorXd p = clamp_to_bounds(std::move(p0), lower, upper);
    Eigen::VectorXd r(m), r_trial(m), scratch(m);
    Eigen::MatrixXd J(m, n);

    residual_fn(p, r);
    double cost = r.squaredNorm();

    LevMarResult result;
    result.cost_trace.push_back(cost);

    double lambda = opt.lambda0;
    bool converged = false;
    int iter = 0;
    bool jacobian_fresh = false;

    numeric_jacobian(residual_fn, p, r, lower, upper, opt, J, scratch);
    jacobian_fresh = true;

    for (; iter < opt.max_iterations && !converged; ++iter) {
        if (!jacobian_fresh) numeric_jacobian(residual_fn, p, r, lower, upper, opt, J, scratch);
        jacobian_fresh = false;

        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;

        if (g.lpNorm<Eigen::Infinity>() < 1e-14 * std::max(1.0, cost)) {
            converged = true;
            break;
        }

        Eigen::VectorXd diag = JtJ.diagonal();
        const double diag_floor = 1e-12 * std::max(diag.maxCoeff(), 1e-300);
        for (Eigen::Index j = 0; j < n; ++j) diag[j] = std::max(diag[j], diag_floor);

        bool accepted = false;
        while (!accepted && !converged) {
            Eigen::MatrixXd A = JtJ;
            A.diagonal() += lambda * diag;
            Eigen::VectorXd delta = A.ldlt().solve(-g);
            if (!delta.allFinite()) {
                lambda *= 4.0;
                if (lambda > 1e13) break;
                continue;
            }
            const Eigen::VectorXd p_trial = clamp_to_bounds(p + delta, lower, upper);
            const Eigen::VectorXd actual_step = p_trial - p;
            double max_rel_step = 0.0;
            for (Eigen::Index j = 0; j < n; ++j)
                max_rel_step = std::max(
                    max_rel_step, std::fabs(actual_step[j]) / std::max(std::fabs(p[j]), 1.0));
            // Damping has shrunk the trust region below the step tolerance:
            // no meaningfully different point remains to try.
            if (max_rel_step <= opt.xtol) {
                converged = true;
                break;
            }
            residual_fn(p_trial, r_trial);
            const double cost_trial = r_trial.squaredNorm();
            if (cost_trial < cost) {
                const double denom = std::max(cost, 1e-300);
                const double actred = (cost - cost_trial) / denom;
                // reduction the local linear model promised for this step
                const Eigen::VectorXd js = J * actual_step;
                const double prered =
                    -(2.0 * g.dot(actual_step) + js.squaredNorm()) / denom;
                p = p_trial;
                r.swap(r_trial);
                cost = cost_trial;
                result.cost_trace.push_back(cost);
                lambda = std::max(lambda / 3.0, 1e-14);
                accepted = true;
                if ((actred <= opt.ftol && prered <= 2.0 * opt.ftol) ||
                    max_rel_step <= opt.xtol)
                    converged = true;
            } else {
                lambda *= 4.0;
                if (lambda > 1e13) break;
            }
        }
        if (!accepted) break;  // converged via step tolerance, or stalled
    }

    // Covariance from the Jacobian at the solution.
    numeric_jacobian(residual_fn, p, r, lower, upper, opt, J, scratch);
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
    Eigen::FullPivLU<Eigen::MatrixXd> lu(JtJ);
    if (lu.isInvertible()) cov = lu.inverse();

    result.params = p;
    result.covariance = cov;
    result.cost = cost;
    result.converged = converged;
    result.iterations = iter;
    result.at_lower.resize(static_cast<std::size_t>(n));
    result.at_upper.resize(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        const double span = std::max(std::fabs(p[j]), 1.0);
        result.at_lower[static_cast<std::size_t>(j)] =
            std::isfinite(lower[j]) && std::fabs(p[j] - lower[j]) <= 1e-12 * span;
        result.at_upper[static_cast<std::size_t>(j)] =
            std::isfinite(upper[j]) && std::fabs(p[j] - upper[j]) <= 1e-12 * span;
    }
    return result;
}

}  // namespace starkhole
