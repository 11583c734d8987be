#include <spmesl/pcd.hpp>
#include <spmesl/errors.hpp>
#include <spmesl/scaled_lasso.hpp>

#include <algorithm>
#include <cmath>

namespace spmesl::pcd {

ActiveSet ActiveSet::all(std::size_t p)
{
    ActiveSet a;
    a.index.resize(p);
    for (std::size_t k = 0; k < p; ++k)
        a.index[k] = k;
    a.flags.assign(p, true);
    return a;
}

ActiveSet ActiveSet::of(std::size_t p, std::span<const std::size_t> columns)
{
    ActiveSet a;
    a.flags.assign(p, false);
    for (auto k : columns) {
        if (k >= p)
            throw DimensionError("active column " + std::to_string(k) + " out of range");
        if (a.flags[k])
            throw DimensionError("duplicate active column " + std::to_string(k));
        a.flags[k] = true;
    }
    for (std::size_t k = 0; k < p; ++k)
        if (a.flags[k])
            a.index.push_back(k);
    return a;
}

namespace {

void check_row_inputs(std::size_t j, const DataMatrix& X, const ResidualMatrix& E,
                      const CoefficientMatrix& B, std::span<const double> lambdas)
{
    const auto m = E.column_index.size();
    if (j >= X.p())
        throw DimensionError("row index out of range");
    if (B.p() != X.p())
        throw DimensionError("coefficient matrix does not match X");
    if (E.values.rows() != X.n() || E.values.cols() != m)
        throw DimensionError("residual matrix shape does not match active set");
    if (lambdas.size() != m)
        throw DimensionError("need one penalty per active column");
}

// One row of Proposition-style simultaneous updates. Column c touches only
// change[c], B(j, I_c) and residual column c.
void update_row(std::size_t j, const Matrix& X, ResidualMatrix& E, Matrix& B,
                std::span<const double> lambdas, std::span<double> change,
                const Executor& exec)
{
    const double n = static_cast<double>(X.rows());
    const auto xj = X.col(j);
    exec.for_each(E.column_index.size(), [&](std::size_t c) {
        const std::size_t k = E.column_index[c];
        auto ec = E.values.col(c);
        const double cur = B(j, k);
        const double a = (k == j) ? 0.0 : dot(xj, ec) / n + cur;
        const double next = soft_threshold(a, lambdas[c]);
        const double diff = cur - next;
        if (diff != 0.0) {
            axpy(diff, xj, ec);
            B(j, k) = next;
            change[c] = std::max(change[c], std::abs(diff));
        }
    });
}

} // namespace

RowSlice row_update(std::size_t j, const DataMatrix& X, ResidualMatrix& E, CoefficientMatrix& B,
                    std::span<const double> lambdas, const Executor& exec, double* max_change)
{
    check_row_inputs(j, X, E, B, lambdas);
    const auto m = E.column_index.size();
    RowSlice row;
    row.j = j;
    row.current.resize(m);
    for (std::size_t c = 0; c < m; ++c)
        row.current[c] = B(j, E.column_index[c]);

    std::vector<double> change(m, 0.0);
    update_row(j, X.values, E, B.storage(), lambdas, change, exec);

    row.next.resize(m);
    for (std::size_t c = 0; c < m; ++c)
        row.next[c] = B(j, E.column_index[c]);
    if (max_change)
        *max_change = change.empty() ? 0.0 : *std::max_element(change.begin(), change.end());
    return row;
}

SweepResult joint_lasso_sweep(const DataMatrix& X, ResidualMatrix& E, CoefficientMatrix& B,
                              std::span<const double> lambdas, double delta,
                              std::size_t max_inner, const Executor& exec)
{
    check_row_inputs(0, X, E, B, lambdas);
    const auto m = E.column_index.size();
    std::vector<double> change(m);
    SweepResult out;
    while (out.sweeps < max_inner) {
        std::fill(change.begin(), change.end(), 0.0);
        for (std::size_t j = 0; j < X.p(); ++j)
            update_row(j, X.values, E, B.storage(), lambdas, change, exec);
        ++out.sweeps;
        const double worst = m ? *std::max_element(change.begin(), change.end()) : 0.0;
        if (worst < delta) {
            out.converged = true;
            break;
        }
    }
    return out;
}

ActiveSet update_sigmas_and_prune(const DataMatrix& X, const CoefficientMatrix& B,
                                  std::vector<double>& sigma, const ActiveSet& active,
                                  double delta, const Executor& exec,
                                  std::vector<std::vector<double>>* history)
{
    const auto m = active.size();
    std::vector<double> next(m);
    std::vector<char> keep(m);
    exec.for_each(m, [&](std::size_t c) {
        const std::size_t k = active.index[c];
        std::vector<double> resid(X.n());
        residual_column(X.values, k, B.values().col(k), resid);
        next[c] = sigma_from_residual(resid);
        keep[c] = std::abs(next[c] - sigma[k]) >= delta;
    });

    ActiveSet out;
    out.flags.assign(active.flags.size(), false);
    for (std::size_t c = 0; c < m; ++c) {
        const std::size_t k = active.index[c];
        sigma[k] = next[c];
        if (history)
            (*history)[k].push_back(next[c]);
        if (keep[c]) {
            out.index.push_back(k);
            out.flags[k] = true;
        }
    }
    return out;
}

ColumnFit estimate_pcd(const DataMatrix& X, double lambda0, const PcdOptions& options)
{
    const auto p = X.p();
    if (p < 2)
        throw DimensionError("need at least 2 variables");
    if (!(lambda0 >= 0.0))
        throw DomainError("lambda0 must be nonnegative");
    if (!(options.delta > 0.0))
        throw DomainError("delta must be positive");

    const Executor exec(options.threads);
    ColumnFit fit;
    fit.B = CoefficientMatrix(p);
    fit.sigma.sigma.assign(p, 1.0);
    fit.sigma.history.assign(p, std::vector<double>{1.0});
    fit.converged.assign(p, false);
    fit.outer_iterations.assign(p, 0);
    fit.sweeps.assign(p, 0);

    ActiveSet active = options.columns ? ActiveSet::of(p, *options.columns) : ActiveSet::all(p);
    std::vector<double> lambdas;
    for (std::size_t r = 0; r < options.max_outer && !active.empty(); ++r) {
        fit.active_history.push_back(active.size());
        lambdas.resize(active.size());
        for (std::size_t c = 0; c < active.size(); ++c)
            lambdas[c] = fit.sigma.sigma[active.index[c]] * lambda0;

        auto E = refresh_residuals(X, fit.B.values(), active.index);
        const auto sweep = joint_lasso_sweep(X, E, fit.B, lambdas, options.delta,
                                             options.max_inner, exec);
        fit.sweep_history.push_back(sweep.sweeps);
        for (auto k : active.index) {
            ++fit.outer_iterations[k];
            fit.sweeps[k] += sweep.sweeps;
        }

        auto next = update_sigmas_and_prune(X, fit.B, fit.sigma.sigma, active, options.delta,
                                            exec, &fit.sigma.history);
        for (auto k : active.index)
            if (!next.flags[k])
                fit.converged[k] = sweep.converged;
        if (options.prune) {
            active = std::move(next);
        } else if (next.empty()) {
            for (auto k : active.index)
                fit.converged[k] = sweep.converged;
            active = ActiveSet::of(p, {});
        } else {
            // Without dropout a column only counts as converged at the common exit.
            for (auto k : active.index)
                fit.converged[k] = false;
        }
    }
    return fit;
}

} // namespace spmesl::pcd
