#include <spmesl/scaled_lasso.hpp>
#include <spmesl/errors.hpp>

#include <algorithm>
#include <cmath>

namespace spmesl {

namespace {

void check_shapes(std::size_t n_y, const Matrix& X, std::size_t n_beta)
{
    if (n_y != X.rows())
        throw DimensionError("response length " + std::to_string(n_y) +
                             " does not match X rows " + std::to_string(X.rows()));
    if (n_beta != X.cols())
        throw DimensionError("coefficient length " + std::to_string(n_beta) +
                             " does not match X cols " + std::to_string(X.cols()));
}

void compute_residual(std::span<const double> y, const Matrix& X, std::span<const double> beta,
                      std::span<double> out)
{
    std::copy(y.begin(), y.end(), out.begin());
    for (std::size_t l = 0; l < X.cols(); ++l)
        if (beta[l] != 0.0)
            axpy(-beta[l], X.col(l), out);
}

} // namespace

LassoResult lasso_cd_inplace(const Matrix& X, double lambda, std::vector<double>& beta,
                             std::span<double> resid, double delta, std::size_t max_inner,
                             std::optional<std::size_t> excluded)
{
    if (!(lambda >= 0.0))
        throw DomainError("lasso_cd requires lambda >= 0");
    const double n = static_cast<double>(X.rows());
    const std::size_t q = X.cols();
    const std::size_t skip = excluded.value_or(q);
    if (skip < q)
        beta[skip] = 0.0;

    LassoResult out;
    while (out.sweeps < max_inner) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < q; ++j) {
            if (j == skip)
                continue;
            auto xj = X.col(j);
            const double a = dot(xj, resid) / n + beta[j];
            const double next = soft_threshold(a, lambda);
            const double diff = beta[j] - next;
            if (diff != 0.0) {
                axpy(diff, xj, resid);
                beta[j] = next;
                max_change = std::max(max_change, std::abs(diff));
            }
        }
        ++out.sweeps;
        if (max_change < delta) {
            out.converged = true;
            break;
        }
    }
    out.beta = beta;
    return out;
}

LassoResult lasso_cd(std::span<const double> y, const Matrix& X, double lambda,
                     std::span<const double> beta_init, double delta, std::size_t max_inner,
                     std::optional<std::size_t> excluded)
{
    check_shapes(y.size(), X, beta_init.size());
    std::vector<double> beta(beta_init.begin(), beta_init.end());
    if (excluded && *excluded < beta.size())
        beta[*excluded] = 0.0;
    std::vector<double> resid(y.size());
    compute_residual(y, X, beta, resid);
    return lasso_cd_inplace(X, lambda, beta, resid, delta, max_inner, excluded);
}

double sigma_from_residual(std::span<const double> resid) noexcept
{
    const double s = std::sqrt(squared_norm(resid) / static_cast<double>(resid.size()));
    return std::max(s, kSigmaFloor);
}

double update_sigma(std::span<const double> y, const Matrix& X, std::span<const double> beta)
{
    check_shapes(y.size(), X, beta.size());
    std::vector<double> resid(y.size());
    compute_residual(y, X, beta, resid);
    return sigma_from_residual(resid);
}

double scaled_lasso_objective(std::span<const double> y, const Matrix& X,
                              std::span<const double> beta, double sigma, double lambda0)
{
    check_shapes(y.size(), X, beta.size());
    std::vector<double> resid(y.size());
    compute_residual(y, X, beta, resid);
    double l1 = 0.0;
    for (double b : beta)
        l1 += std::abs(b);
    const double n = static_cast<double>(y.size());
    return squared_norm(resid) / (2.0 * n * sigma) + sigma / 2.0 + lambda0 * l1;
}

ScaledLassoSolution scaled_lasso(const ScaledLassoProblem& problem)
{
    if (problem.X == nullptr)
        throw DimensionError("scaled_lasso: no design matrix");
    const Matrix& X = *problem.X;
    const auto y = problem.y;
    if (y.size() != X.rows())
        throw DimensionError("response length does not match X rows");
    if (!(problem.lambda0 >= 0.0))
        throw DomainError("lambda0 must be nonnegative");
    if (!(problem.delta > 0.0))
        throw DomainError("delta must be positive");

    ScaledLassoSolution sol;
    sol.beta.assign(X.cols(), 0.0);
    sol.sigma = 1.0;
    sol.sigma_history.push_back(sol.sigma);
    sol.objective_history.push_back(
        scaled_lasso_objective(y, X, sol.beta, sol.sigma, problem.lambda0));

    std::vector<double> resid(y.size());
    while (sol.outer_iterations < problem.max_outer) {
        const double lambda = sol.sigma * problem.lambda0;
        // Fresh residual once per outer iteration bounds incremental drift.
        compute_residual(y, X, sol.beta, resid);
        auto inner = lasso_cd_inplace(X, lambda, sol.beta, resid, problem.delta,
                                      problem.max_inner, problem.excluded);
        sol.inner_iteration_counts.push_back(inner.sweeps);

        compute_residual(y, X, sol.beta, resid);
        const double next_sigma = sigma_from_residual(resid);
        const double change = std::abs(next_sigma - sol.sigma);
        sol.sigma = next_sigma;
        ++sol.outer_iterations;
        sol.sigma_history.push_back(sol.sigma);
        sol.objective_history.push_back(
            scaled_lasso_objective(y, X, sol.beta, sol.sigma, problem.lambda0));
        if (change < problem.delta) {
            sol.converged = inner.converged;
            break;
        }
    }
    sol.objective = sol.objective_history.back();
    return sol;
}

} // namespace spmesl
