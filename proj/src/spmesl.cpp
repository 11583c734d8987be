#include <spmesl/spmesl.hpp>
#include <spmesl/errors.hpp>
#include <spmesl/pcd.hpp>
#include <spmesl/scaled_lasso.hpp>

#include <chrono>
#include <cmath>

namespace spmesl {

CoefficientMatrix::CoefficientMatrix(Matrix values) : values_(std::move(values))
{
    if (values_.rows() != values_.cols())
        throw DimensionError("coefficient matrix must be square");
    for (std::size_t k = 0; k < values_.cols(); ++k)
        if (values_(k, k) != 0.0)
            throw DomainError("coefficient matrix diagonal must be zero (entry " +
                              std::to_string(k) + ")");
}

void CoefficientMatrix::set(std::size_t j, std::size_t k, double v)
{
    if (j == k)
        throw DomainError("coefficient matrix diagonal is fixed at zero");
    values_(j, k) = v;
}

std::string_view to_string(SolverKind s) noexcept
{
    return s == SolverKind::CD ? "cd" : "pcd";
}

SolverKind parse_solver_kind(std::string_view s)
{
    if (s == "cd") return SolverKind::CD;
    if (s == "pcd") return SolverKind::PCD;
    throw DomainError("unknown solver '" + std::string(s) + "' (expected cd|pcd)");
}

std::size_t ColumnFit::converged_count() const noexcept
{
    std::size_t c = 0;
    for (bool b : converged)
        c += b ? 1 : 0;
    return c;
}

ColumnFit fit_columns_cd(const DataMatrix& X, double lambda0, const SolverOptions& options)
{
    const auto p = X.p();
    if (p < 2)
        throw DimensionError("need at least 2 variables");
    if (!(lambda0 >= 0.0))
        throw DomainError("lambda0 must be nonnegative");

    ColumnFit fit;
    fit.B = CoefficientMatrix(p);
    fit.sigma.sigma.assign(p, 1.0);
    fit.sigma.history.assign(p, {});
    fit.converged.assign(p, false);
    fit.outer_iterations.assign(p, 0);
    fit.sweeps.assign(p, 0);

    // Each column writes only to its own slots.
    std::vector<char> ok(p, 0);
    pcd::Executor exec(options.threads);
    exec.for_each(p, [&](std::size_t k) {
        ScaledLassoProblem problem;
        problem.y = X.values.col(k);
        problem.X = &X.values;
        problem.lambda0 = lambda0;
        problem.delta = options.delta;
        problem.max_outer = options.max_outer;
        problem.max_inner = options.max_inner;
        problem.excluded = k;
        auto sol = scaled_lasso(problem);

        auto col = fit.B.storage().col(k);
        std::copy(sol.beta.begin(), sol.beta.end(), col.begin());
        col[k] = 0.0;
        fit.sigma.sigma[k] = sol.sigma;
        fit.sigma.history[k] = std::move(sol.sigma_history);
        ok[k] = sol.converged ? 1 : 0;
        fit.outer_iterations[k] = sol.outer_iterations;
        std::size_t total = 0;
        for (auto s : sol.inner_iteration_counts)
            total += s;
        fit.sweeps[k] = total;
    });
    for (std::size_t k = 0; k < p; ++k)
        fit.converged[k] = ok[k] != 0;
    if (fit.converged_count() == 0)
        throw NonConvergence("no column regression converged", options.max_outer);
    return fit;
}

Matrix assemble_precision(const CoefficientMatrix& B, std::span<const double> sigma)
{
    const auto p = B.p();
    if (sigma.size() != p)
        throw DimensionError("need one sigma per column");
    Matrix omega(p, p);
    for (std::size_t k = 0; k < p; ++k) {
        if (!(sigma[k] > 0.0))
            throw DomainError("sigma must be positive (column " + std::to_string(k) + ")");
        const double dkk = 1.0 / (sigma[k] * sigma[k]);
        for (std::size_t j = 0; j < p; ++j)
            omega(j, k) = (j == k) ? dkk : -B(j, k) * dkk;
    }
    return omega;
}

Matrix symmetrize(const Matrix& omega1)
{
    if (omega1.rows() != omega1.cols())
        throw DimensionError("symmetrize needs a square matrix");
    Matrix out = omega1;
    const auto p = omega1.rows();
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = j + 1; k < p; ++k) {
            const double v = std::abs(omega1(j, k)) <= std::abs(omega1(k, j)) ? omega1(j, k)
                                                                              : omega1(k, j);
            out(j, k) = v;
            out(k, j) = v;
        }
    return out;
}

Matrix rescale_to_original(const Matrix& omega_std, std::span<const double> col_scales)
{
    const auto p = omega_std.rows();
    if (omega_std.cols() != p || col_scales.size() != p)
        throw DimensionError("rescale_to_original: shape mismatch");
    for (std::size_t j = 0; j < p; ++j)
        if (!(col_scales[j] > 0.0))
            throw DomainError("column scales must be positive");
    Matrix out(p, p);
    for (std::size_t k = 0; k < p; ++k)
        for (std::size_t j = 0; j < p; ++j)
            out(j, k) = omega_std(j, k) / (col_scales[j] * col_scales[k]);
    return out;
}

PrecisionEstimate estimate(const Matrix& raw, const PenaltySpec& penalty, SolverKind solver,
                           const SolverOptions& options)
{
    const auto data = standardize(raw);

    PrecisionEstimate est;
    est.penalty = penalty;
    est.solver = solver;
    const auto t0 = std::chrono::steady_clock::now();
    if (solver == SolverKind::CD) {
        est.fit = fit_columns_cd(data, penalty.value, options);
    } else {
        pcd::PcdOptions o;
        static_cast<SolverOptions&>(o) = options;
        est.fit = pcd::estimate_pcd(data, penalty.value, o);
        if (est.fit.converged_count() == 0)
            throw NonConvergence("no column converged in the parallel solver", options.max_outer);
    }
    const auto t1 = std::chrono::steady_clock::now();
    est.fit_seconds = std::chrono::duration<double>(t1 - t0).count();

    const auto omega1 = assemble_precision(est.fit.B, est.fit.sigma.sigma);
    est.omega = rescale_to_original(symmetrize(omega1), data.col_scales);
    est.per_column_sigma = est.fit.sigma.sigma;
    est.converged_columns = est.fit.converged_count();
    est.scale = EstimateScale::Original;
    return est;
}

} // namespace spmesl
