#pragma once
#include <cstddef>
#include <span>
#include <vector>

namespace spmesl {

/// Dense column-major matrix of doubles.
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {}

    static Matrix identity(std::size_t n);
    /// Build from row-major nested vectors (all rows must share a length).
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

    std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const noexcept
    {
        return {data_.data() + j * rows_, rows_};
    }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    Matrix transpose() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// n x p sample matrix together with the column transform applied to it.
///
/// When `standardized` is set, column j of `values` equals
/// (raw_j - col_means[j]) / col_scales[j], centred with x^T x = n.
struct DataMatrix
{
    Matrix values;
    std::vector<double> col_means;
    std::vector<double> col_scales;
    bool standardized = false;

    std::size_t n() const noexcept { return values.rows(); }
    std::size_t p() const noexcept { return values.cols(); }
};

/// Wraps a raw matrix without transforming it (means 0, scales 1).
DataMatrix as_data(Matrix raw);

/// Centre every column and scale it so that x^T x = n.
/// Throws DimensionError if n < 2 and ConstantColumn for a zero-variance column.
DataMatrix standardize(const Matrix& raw);

/// Undo the recorded column transform.
Matrix destandardize(const DataMatrix& data);

inline double soft_threshold(double a, double lambda) noexcept
{
    if (a > lambda)
        return a - lambda;
    if (a < -lambda)
        return a + lambda;
    return 0.0;
}

// Fixed-order kernels. Every solver goes through these so that the
// sequential and row-parallel paths produce bit-identical arithmetic.
double dot(std::span<const double> x, std::span<const double> y) noexcept;
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;
double squared_norm(std::span<const double> x) noexcept;

/// One residual column per active response. Column c belongs to
/// variable `column_index[c]`.
struct ResidualMatrix
{
    Matrix values;
    std::vector<std::size_t> column_index;
};

/// out = x_k - X * coef, where coef is a length-p coefficient column with
/// coef[k] == 0. Terms are accumulated in ascending predictor order.
void residual_column(const Matrix& X, std::size_t k, std::span<const double> coef,
                     std::span<double> out);

/// Fresh recomputation of x_{active[c]} - X b_{active[c]} for every c.
/// B is p x p with zero diagonal; column k holds the coefficients of response k.
ResidualMatrix refresh_residuals(const DataMatrix& X, const Matrix& B,
                                 std::span<const std::size_t> active);

} // namespace spmesl
