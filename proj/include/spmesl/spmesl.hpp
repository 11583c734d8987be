#pragma once
#include <spmesl/matrix.hpp>
#include <spmesl/penalty.hpp>

#include <cstddef>
#include <string_view>
#include <vector>

namespace spmesl {

/// p x p regression coefficients; column k holds beta_{-k}, the
/// coefficients of the regression of x_k on the other columns.
/// The diagonal is identically zero.
class CoefficientMatrix
{
public:
    CoefficientMatrix() = default;
    explicit CoefficientMatrix(std::size_t p) : values_(p, p) {}
    /// Throws DimensionError unless square with a zero diagonal.
    explicit CoefficientMatrix(Matrix values);

    std::size_t p() const noexcept { return values_.cols(); }
    double operator()(std::size_t j, std::size_t k) const noexcept { return values_(j, k); }
    /// Writes to the diagonal are rejected with DomainError.
    void set(std::size_t j, std::size_t k, double v);

    const Matrix& values() const noexcept { return values_; }
    /// Mutable storage for solvers; callers keep the diagonal at zero.
    Matrix& storage() noexcept { return values_; }

private:
    Matrix values_;
};

struct NoiseScales
{
    std::vector<double> sigma;
    /// Per column: sigma^(0) = 1 followed by one value per outer iteration.
    std::vector<std::vector<double>> history;
};

enum class SolverKind { CD, PCD };
std::string_view to_string(SolverKind s) noexcept;
SolverKind parse_solver_kind(std::string_view s);

enum class EstimateScale { Standardized, Original };

/// Column-wise diagnostics from either solver.
struct ColumnFit
{
    CoefficientMatrix B;
    NoiseScales sigma;
    std::vector<bool> converged;
    std::vector<std::size_t> outer_iterations;
    /// Total inner sweeps spent on each column.
    std::vector<std::size_t> sweeps;
    /// PCD only: active-column count at the start of each outer iteration,
    /// and the joint sweeps that iteration needed.
    std::vector<std::size_t> active_history;
    std::vector<std::size_t> sweep_history;

    std::size_t converged_count() const noexcept;
};

struct SolverOptions
{
    double delta = 1e-4;
    std::size_t max_outer = 100;
    std::size_t max_inner = 10000;
    /// 0 = let the runtime decide.
    std::size_t threads = 0;
};

struct PrecisionEstimate
{
    Matrix omega;
    PenaltySpec penalty;
    SolverKind solver = SolverKind::CD;
    std::vector<double> per_column_sigma;
    std::size_t converged_columns = 0;
    EstimateScale scale = EstimateScale::Original;
    ColumnFit fit;
    double fit_seconds = 0.0;
};

/**
 * Solve the p column-wise scaled lasso problems (x_k on all other columns)
 * one after another with the sequential coordinate-descent solver.
 * Columns may be distributed over `options.threads` workers; each column's
 * result does not depend on scheduling. Unconverged columns are flagged and
 * keep their last iterate; NonConvergence is thrown only if no column converged.
 */
ColumnFit fit_columns_cd(const DataMatrix& X, double lambda0, const SolverOptions& options = {});

/// Omega_1 with omega[k][k] = sigma_k^{-2}, omega[j][k] = -B[j][k] sigma_k^{-2}.
Matrix assemble_precision(const CoefficientMatrix& B, std::span<const double> sigma);

/// For each pair keep the entry of smaller magnitude; ties keep omega1[j][k], j < k.
Matrix symmetrize(const Matrix& omega1);

/// out[j][k] = omega_std[j][k] / (scale_j scale_k).
Matrix rescale_to_original(const Matrix& omega_std, std::span<const double> col_scales);

/// standardize -> column fits -> assemble -> symmetrize -> rescale.
PrecisionEstimate estimate(const Matrix& raw, const PenaltySpec& penalty, SolverKind solver,
                           const SolverOptions& options = {});

} // namespace spmesl
