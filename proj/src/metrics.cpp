#include <spmesl/metrics.hpp>
#include <spmesl/errors.hpp>

#include <cmath>

namespace spmesl::metrics {

namespace {

void check_same_square(const Matrix& a, const Matrix& b)
{
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw DimensionError("metrics need two square matrices of the same size");
}

double ratio_or(double num, double den, double fallback)
{
    return den > 0.0 ? num / den : fallback;
}

} // namespace

ConfusionCounts confusion(const Matrix& omega_hat, const Matrix& omega_true)
{
    check_same_square(omega_hat, omega_true);
    ConfusionCounts c;
    const auto p = omega_hat.rows();
    for (std::size_t k = 1; k < p; ++k)
        for (std::size_t j = 0; j < k; ++j) {
            const bool est = omega_hat(j, k) != 0.0;
            const bool truth = omega_true(j, k) != 0.0;
            if (est && truth)
                ++c.tp;
            else if (est)
                ++c.fp;
            else if (truth)
                ++c.fn;
            else
                ++c.tn;
        }
    return c;
}

double mcc(const ConfusionCounts& c) noexcept
{
    const double tp = static_cast<double>(c.tp);
    const double fp = static_cast<double>(c.fp);
    const double tn = static_cast<double>(c.tn);
    const double fn = static_cast<double>(c.fn);
    const double f1 = tp + fp, f2 = tp + fn, f3 = tn + fp, f4 = tn + fn;
    if (f1 == 0.0 || f2 == 0.0 || f3 == 0.0 || f4 == 0.0)
        return 0.0;
    const double num = tp * tn - fp * fn;
    return num / (std::sqrt(f1) * std::sqrt(f2)) / (std::sqrt(f3) * std::sqrt(f4));
}

double frobenius_distance(const Matrix& a, const Matrix& b)
{
    check_same_square(a, b);
    double s = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = da[i] - db[i];
        s += d * d;
    }
    return std::sqrt(s);
}

EvalReport evaluate(const ConfusionCounts& c, const Matrix& omega_hat, const Matrix& omega_true)
{
    check_same_square(omega_hat, omega_true);
    const auto p = omega_hat.rows();
    const std::size_t pairs = p * (p - (p > 0 ? 1 : 0)) / 2;
    if (c.total() != pairs)
        throw DimensionError("confusion counts sum to " + std::to_string(c.total()) +
                             ", expected p(p-1)/2 = " + std::to_string(pairs));
    const double tp = static_cast<double>(c.tp);
    const double fp = static_cast<double>(c.fp);
    const double tn = static_cast<double>(c.tn);
    const double fn = static_cast<double>(c.fn);

    EvalReport r;
    r.counts = c;
    r.sen = ratio_or(tp, tp + fn, 1.0);
    r.spe = ratio_or(tn, tn + fp, 1.0);
    r.fdr = ratio_or(fp, tp + fp, 0.0);
    r.misr = ratio_or(fp + fn, static_cast<double>(pairs), 0.0);
    r.mcc = mcc(c);
    r.frobenius_error = frobenius_distance(omega_true, omega_hat);
    r.estimated_edges = c.tp + c.fp;
    r.true_edges = c.tp + c.fn;
    return r;
}

} // namespace spmesl::metrics
