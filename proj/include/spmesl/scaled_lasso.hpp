#pragma once
#include <spmesl/matrix.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace spmesl {

inline constexpr double kSigmaFloor = 1e-8;

struct LassoResult
{
    std::vector<double> beta;
    std::size_t sweeps = 0;
    bool converged = false;
};

/**
 * Cyclic coordinate descent for
 *   min_beta ||y - X beta||^2 / (2n) + lambda ||beta||_1
 * starting from `beta_init` (warm start). Coordinates are visited in
 * ascending index order. Stops once a full sweep moves no coefficient by
 * `delta` or more; after `max_inner` sweeps the last iterate is returned
 * with converged = false.
 *
 * `excluded`, if set, names a column of X that is not a predictor: its
 * coefficient stays pinned at zero. This lets the column regressions of the
 * precision estimator run against the full data matrix without copying.
 */
LassoResult lasso_cd(std::span<const double> y, const Matrix& X, double lambda,
                     std::span<const double> beta_init, double delta, std::size_t max_inner,
                     std::optional<std::size_t> excluded = std::nullopt);

/// Same as above but continues from a caller-maintained residual
/// `resid == y - X beta`, updating both in place.
LassoResult lasso_cd_inplace(const Matrix& X, double lambda, std::vector<double>& beta,
                             std::span<double> resid, double delta, std::size_t max_inner,
                             std::optional<std::size_t> excluded = std::nullopt);

/// ||y - X beta||_2 / sqrt(n), floored at kSigmaFloor.
double update_sigma(std::span<const double> y, const Matrix& X, std::span<const double> beta);

/// Sigma from an already computed residual vector.
double sigma_from_residual(std::span<const double> resid) noexcept;

/// ||y - X beta||^2 / (2 n sigma) + sigma / 2 + lambda0 ||beta||_1
double scaled_lasso_objective(std::span<const double> y, const Matrix& X,
                              std::span<const double> beta, double sigma, double lambda0);

struct ScaledLassoProblem
{
    std::span<const double> y;
    const Matrix* X = nullptr;
    double lambda0 = 0.0;
    double delta = 1e-4;
    std::size_t max_outer = 100;
    std::size_t max_inner = 10000;
    std::optional<std::size_t> excluded;
};

struct ScaledLassoSolution
{
    std::vector<double> beta;
    double sigma = 1.0;
    std::size_t outer_iterations = 0;
    std::vector<std::size_t> inner_iteration_counts;
    /// sigma^(0) = 1 followed by one entry per outer iteration.
    std::vector<double> sigma_history;
    /// Objective at (beta^(r), sigma^(r)) for r = 0, 1, ...
    std::vector<double> objective_history;
    double objective = 0.0;
    bool converged = false;
};

/**
 * Block coordinate descent for the scaled lasso
 *   min_{beta, sigma>0} ||y - X beta||^2 / (2 n sigma) + sigma / 2 + lambda0 ||beta||_1.
 *
 * Starts from (beta, sigma) = (0, 1). Each outer iteration solves the lasso
 * at lambda = sigma * lambda0 warm-started from the previous beta, then sets
 * sigma = ||y - X beta|| / sqrt(n). Stops when |sigma change| < delta.
 */
ScaledLassoSolution scaled_lasso(const ScaledLassoProblem& problem);

} // namespace spmesl
