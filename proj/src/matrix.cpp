#include <spmesl/matrix.hpp>
#include <spmesl/errors.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace spmesl {

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    if (rows.empty())
        return {};
    const auto cols = rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw DimensionError("ragged rows: row " + std::to_string(i) + " has " +
                                 std::to_string(rows[i].size()) + " entries, expected " +
                                 std::to_string(cols));
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

Matrix Matrix::transpose() const
{
    Matrix t(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i)
            t(j, i) = (*this)(i, j);
    return t;
}

DataMatrix as_data(Matrix raw)
{
    DataMatrix d;
    d.col_means.assign(raw.cols(), 0.0);
    d.col_scales.assign(raw.cols(), 1.0);
    d.values = std::move(raw);
    d.standardized = false;
    return d;
}

DataMatrix standardize(const Matrix& raw)
{
    const auto n = raw.rows();
    const auto p = raw.cols();
    if (n < 2)
        throw DimensionError("standardize needs at least 2 samples, got " + std::to_string(n));

    DataMatrix out;
    out.values = Matrix(n, p);
    out.col_means.resize(p);
    out.col_scales.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        auto x = raw.col(j);
        if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }))
            throw ConstantColumn(j);

        double mean = 0.0;
        for (double v : x)
            mean += v;
        mean /= static_cast<double>(n);

        auto c = out.values.col(j);
        for (std::size_t i = 0; i < n; ++i)
            c[i] = x[i] - mean;
        // Second centring pass removes the rounding left by the first.
        double resid = 0.0;
        for (double v : c)
            resid += v;
        resid /= static_cast<double>(n);
        for (auto& v : c)
            v -= resid;
        mean += resid;

        const double scale = std::sqrt(squared_norm(c) / static_cast<double>(n));
        if (!(scale > 0.0))
            throw ConstantColumn(j);
        for (auto& v : c)
            v /= scale;
        out.col_means[j] = mean;
        out.col_scales[j] = scale;
    }
    out.standardized = true;
    return out;
}

Matrix destandardize(const DataMatrix& data)
{
    Matrix raw(data.n(), data.p());
    for (std::size_t j = 0; j < data.p(); ++j) {
        auto src = data.values.col(j);
        auto dst = raw.col(j);
        for (std::size_t i = 0; i < data.n(); ++i)
            dst[i] = src[i] * data.col_scales[j] + data.col_means[j];
    }
    return raw;
}

// Four independent accumulators combined in a fixed order: deterministic,
// and enough instruction-level parallelism to keep the FPU busy.
double dot(std::span<const double> x, std::span<const double> y) noexcept
{
    const std::size_t n = x.size();
    const double* a = x.data();
    const double* b = y.data();
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i)
        s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept
{
    const std::size_t n = x.size();
    const double* a = x.data();
    double* b = y.data();
    for (std::size_t i = 0; i < n; ++i)
        b[i] += alpha * a[i];
}

double squared_norm(std::span<const double> x) noexcept { return dot(x, x); }

void residual_column(const Matrix& X, std::size_t k, std::span<const double> coef,
                     std::span<double> out)
{
    auto xk = X.col(k);
    std::copy(xk.begin(), xk.end(), out.begin());
    for (std::size_t l = 0; l < X.cols(); ++l) {
        if (l == k || coef[l] == 0.0)
            continue;
        axpy(-coef[l], X.col(l), out);
    }
}

ResidualMatrix refresh_residuals(const DataMatrix& X, const Matrix& B,
                                 std::span<const std::size_t> active)
{
    const auto p = X.p();
    if (B.rows() != p || B.cols() != p)
        throw DimensionError("coefficient matrix must be " + std::to_string(p) + "x" +
                             std::to_string(p));
    std::set<std::size_t> seen;
    for (auto k : active) {
        if (k >= p)
            throw DimensionError("active index " + std::to_string(k) + " out of range");
        if (!seen.insert(k).second)
            throw DimensionError("duplicate active index " + std::to_string(k));
    }

    ResidualMatrix E;
    E.values = Matrix(X.n(), active.size());
    E.column_index.assign(active.begin(), active.end());
    for (std::size_t c = 0; c < active.size(); ++c)
        residual_column(X.values, active[c], B.col(active[c]), E.values.col(c));
    return E;
}

} // namespace spmesl
