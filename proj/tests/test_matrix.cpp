#include <doctest.h>

#include <spmesl/csv_io.hpp>
#include <spmesl/errors.hpp>
#include <spmesl/matrix.hpp>
#include <spmesl/rng.hpp>

#include <cmath>
#include <filesystem>

using namespace spmesl;

namespace {

Matrix random_matrix(std::size_t n, std::size_t p, std::uint64_t seed, double scale = 1.0)
{
    Rng rng(seed);
    Matrix m(n, p);
    for (auto& v : m.data())
        v = scale * (rng.uniform() * 4.0 - 1.0);
    return m;
}

std::filesystem::path temp_dir()
{
    auto d = std::filesystem::temp_directory_path() / "spmesl_test_matrix";
    std::filesystem::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("standardize: two-sample hand example")
{
    const auto d = standardize(Matrix::from_rows({{1.0}, {3.0}}));
    CHECK(d.standardized);
    CHECK(d.values(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(d.values(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.col_means[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d.col_scales[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("standardize: already standardized input is left alone")
{
    const auto X = Matrix::from_rows({{1.0, -1.0}, {-1.0, 1.0}, {1.0, 1.0}, {-1.0, -1.0}});
    const auto d = standardize(X);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(d.col_scales[j] == doctest::Approx(1.0).epsilon(1e-15));
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(d.values(i, j) == X(i, j));
    }
}

TEST_CASE("standardize: errors")
{
    CHECK_THROWS_AS(standardize(Matrix::from_rows({{1.0, 2.0}, {3.0, 2.0}, {5.0, 2.0}})),
                    ConstantColumn);
    try {
        standardize(Matrix::from_rows({{1.0, 2.0}, {3.0, 2.0}}));
    } catch (const ConstantColumn& e) {
        CHECK(e.column() == 1);
    }
    CHECK_THROWS_AS(standardize(Matrix::from_rows({{1.0, 2.0}})), DimensionError);
}

TEST_CASE("standardize: invariants, idempotence and exact inverse on random data")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t n = 5 + seed * 3;
        const std::size_t p = 1 + seed % 7;
        auto raw = random_matrix(n, p, seed, 10.0 * static_cast<double>(seed));
        const auto d = standardize(raw);
        const double dn = static_cast<double>(n);
        for (std::size_t j = 0; j < p; ++j) {
            double mean = 0.0;
            for (double v : d.values.col(j))
                mean += v;
            CHECK(std::abs(mean / dn) <= 1e-10 * std::sqrt(dn));
            CHECK(std::abs(squared_norm(d.values.col(j)) - dn) <= 1e-8 * dn);
            CHECK(d.col_scales[j] > 0.0);
        }

        const auto again = standardize(d.values);
        for (std::size_t i = 0; i < d.values.data().size(); ++i)
            CHECK(std::abs(again.values.data()[i] - d.values.data()[i]) <= 1e-10);

        const auto back = destandardize(d);
        for (std::size_t i = 0; i < raw.data().size(); ++i)
            CHECK(std::abs(back.data()[i] - raw.data()[i]) <=
                  1e-10 * std::max(1.0, std::abs(raw.data()[i])));
    }
}

TEST_CASE("soft_threshold examples")
{
    CHECK(soft_threshold(1.2, 0.5) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(soft_threshold(-0.3, 0.5) == 0.0);
    for (double a : {-3.5, -1e-9, 0.0, 2.0, 1e12})
        CHECK(soft_threshold(a, 0.0) == a);
}

TEST_CASE("soft_threshold properties: odd, shrinking, non-expansive")
{
    Rng rng(7);
    for (int t = 0; t < 2000; ++t) {
        const double a = (rng.uniform() - 0.5) * 10.0;
        const double b = (rng.uniform() - 0.5) * 10.0;
        const double lam = rng.uniform() * 3.0;
        const double sa = soft_threshold(a, lam);
        CHECK(soft_threshold(-a, lam) == -sa);
        CHECK(std::abs(sa) <= std::abs(a));
        CHECK(std::abs(sa - soft_threshold(b, lam)) <= std::abs(a - b) + 1e-15);
    }
}

TEST_CASE("refresh_residuals")
{
    SUBCASE("zero coefficients give the selected columns")
    {
        const auto X = as_data(random_matrix(6, 4, 3));
        const std::vector<std::size_t> active{1, 3};
        const auto E = refresh_residuals(X, Matrix(4, 4), active);
        CHECK(E.column_index == active);
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < 6; ++i)
                CHECK(E.values(i, c) == X.values(i, active[c]));
    }
    SUBCASE("p = 2 direct substitution")
    {
        const auto X = as_data(random_matrix(5, 2, 4));
        Matrix B(2, 2);
        B(0, 1) = 1.0; // b_2 = (1, 0)^T
        const std::vector<std::size_t> active{1};
        const auto E = refresh_residuals(X, B, active);
        for (std::size_t i = 0; i < 5; ++i)
            CHECK(E.values(i, 0) == doctest::Approx(X.values(i, 1) - X.values(i, 0)));
    }
    SUBCASE("random n=5 p=3 against a brute-force product")
    {
        const auto X = as_data(random_matrix(5, 3, 5));
        Matrix B(3, 3);
        Rng rng(11);
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                if (j != k)
                    B(j, k) = rng.uniform() - 0.5;
        const std::vector<std::size_t> active{0, 1, 2};
        const auto E = refresh_residuals(X, B, active);
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t i = 0; i < 5; ++i) {
                double xb = 0.0;
                for (std::size_t l = 0; l < 3; ++l)
                    xb += X.values(i, l) * B(l, k);
                CHECK(std::abs(E.values(i, k) - (X.values(i, k) - xb)) <= 1e-12);
            }
    }
    SUBCASE("shape and index errors")
    {
        const auto X = as_data(random_matrix(5, 3, 6));
        const std::vector<std::size_t> ok{0};
        const std::vector<std::size_t> dup{1, 1};
        const std::vector<std::size_t> bad{3};
        CHECK_THROWS_AS(refresh_residuals(X, Matrix(2, 2), ok), DimensionError);
        CHECK_THROWS_AS(refresh_residuals(X, Matrix(3, 3), dup), DimensionError);
        CHECK_THROWS_AS(refresh_residuals(X, Matrix(3, 3), bad), DimensionError);
    }
}

TEST_CASE("matrix CSV round trip is exact")
{
    const auto path = temp_dir() / "m.csv";
    const auto m = random_matrix(7, 4, 21, 1e3);
    io::write_matrix_csv(path, m);
    CHECK(io::read_matrix_csv(path) == m);
}

TEST_CASE("standardized matrix persists with its JSON sidecar")
{
    const auto path = temp_dir() / "std.csv";
    const auto d = standardize(random_matrix(9, 3, 22, 5.0));
    io::write_standardized(path, d);
    CHECK(std::filesystem::exists(io::sidecar_path(path)));
    const auto back = io::read_standardized(path);
    CHECK(back.values == d.values);
    CHECK(back.col_means == d.col_means);
    CHECK(back.col_scales == d.col_scales);
    CHECK(back.standardized);
}

TEST_CASE("CSV reader rejects malformed input")
{
    const auto dir = temp_dir();
    io::write_file(dir / "ragged.csv", "1,2\n3\n");
    io::write_file(dir / "text.csv", "1,abc\n");
    io::write_file(dir / "crlf.csv", "1,2\r\n3,4\r\n");
    CHECK_THROWS_AS(io::read_matrix_csv(dir / "ragged.csv"), IOError);
    CHECK_THROWS_AS(io::read_matrix_csv(dir / "text.csv"), IOError);
    CHECK_THROWS_AS(io::read_matrix_csv(dir / "missing.csv"), IOError);
    CHECK(io::read_matrix_csv(dir / "crlf.csv") == Matrix::from_rows({{1, 2}, {3, 4}}));
}
