#pragma once
#include <spmesl/matrix.hpp>
#include <spmesl/spmesl.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace spmesl::pcd {

/// Columns still being iterated. `index` is ascending; `flags[k]` is true
/// iff k is in `index`.
struct ActiveSet
{
    std::vector<std::size_t> index;
    std::vector<bool> flags;

    static ActiveSet all(std::size_t p);
    static ActiveSet of(std::size_t p, std::span<const std::size_t> columns);
    std::size_t size() const noexcept { return index.size(); }
    bool empty() const noexcept { return index.empty(); }
};

/// Row j of B restricted to the active columns, before and after an update.
struct RowSlice
{
    std::size_t j = 0;
    std::vector<double> current;
    std::vector<double> next;
};

/// Runs a callable over [0, count) either serially or across threads.
/// The callable must only touch state owned by its index.
class Executor
{
public:
    /// threads == 1 gives the serial reference executor; 0 = runtime default.
    explicit Executor(std::size_t threads = 0) : threads_(threads) {}
    std::size_t threads() const noexcept { return threads_; }
    template <class F>
    void for_each(std::size_t count, F&& f) const;

private:
    std::size_t threads_;
};

/**
 * Update row j of B for every active column simultaneously:
 *   a = x_j^T E / n + B[j, I],  a[c] = 0 where I_c == j,
 *   B[j, I] <- soft(a, lambdas),  E <- E + x_j (B_old[j, I] - B_new[j, I]).
 * `lambdas[c]` is the penalty of residual column c.
 * Returns the row before and after; `max_change` receives the largest
 * coefficient movement.
 */
RowSlice row_update(std::size_t j, const DataMatrix& X, ResidualMatrix& E, CoefficientMatrix& B,
                    std::span<const double> lambdas, const Executor& exec,
                    double* max_change = nullptr);

struct SweepResult
{
    std::size_t sweeps = 0;
    bool converged = false;
};

/// Repeat full row cycles j = 0..p-1 until max |B_next - B_cur| over the
/// active columns is below delta, or `max_inner` cycles ran.
SweepResult joint_lasso_sweep(const DataMatrix& X, ResidualMatrix& E, CoefficientMatrix& B,
                              std::span<const double> lambdas, double delta,
                              std::size_t max_inner, const Executor& exec);

/// Recompute sigma for active columns from fresh residuals, then drop the
/// columns whose sigma moved by less than delta (stable, order preserving).
/// Returns the new active set; `sigma` is updated in place.
ActiveSet update_sigmas_and_prune(const DataMatrix& X, const CoefficientMatrix& B,
                                  std::vector<double>& sigma, const ActiveSet& active,
                                  double delta, const Executor& exec,
                                  std::vector<std::vector<double>>* history = nullptr);

struct PcdOptions : SolverOptions
{
    /// Disable active-column dropout: every starting column is iterated
    /// until the outer criterion holds for all of them at once.
    bool prune = true;
    /// Restrict the fit to these columns (others keep B = 0, sigma = 1).
    std::optional<std::vector<std::size_t>> columns;
};

/// Row-wise parallel coordinate descent over all p column problems at once.
ColumnFit estimate_pcd(const DataMatrix& X, double lambda0, const PcdOptions& options = {});

// ---------------------------------------------------------------------------

template <class F>
void Executor::for_each(std::size_t count, F&& f) const
{
    if (threads_ == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i)
            f(i);
        return;
    }
    const long long n = static_cast<long long>(count);
    if (threads_ == 0) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < n; ++i)
            f(static_cast<std::size_t>(i));
    } else {
        const int t = static_cast<int>(threads_);
#pragma omp parallel for schedule(static) num_threads(t)
        for (long long i = 0; i < n; ++i)
            f(static_cast<std::size_t>(i));
    }
}

} // namespace spmesl::pcd
