#pragma once
#include <spmesl/matrix.hpp>

#include <cstddef>

namespace spmesl::metrics {

/// Edge confusion counts over unordered pairs j < k.
struct ConfusionCounts
{
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct EvalReport
{
    double sen = 0.0;
    double spe = 0.0;
    double fdr = 0.0;
    double misr = 0.0;
    double mcc = 0.0;
    double frobenius_error = 0.0;
    std::size_t estimated_edges = 0;
    std::size_t true_edges = 0;
    ConfusionCounts counts;
};

/// Exact-nonzero comparison of the strict upper triangles.
ConfusionCounts confusion(const Matrix& omega_hat, const Matrix& omega_true);

/// Vacuous ratios: SEN and SPE are 1 with an empty denominator, FDR and MCC are 0.
EvalReport evaluate(const ConfusionCounts& counts, const Matrix& omega_hat,
                    const Matrix& omega_true);

/// Matthews correlation with the denominator taken as a product of square
/// roots so intermediate values stay small.
double mcc(const ConfusionCounts& c) noexcept;

double frobenius_distance(const Matrix& a, const Matrix& b);

} // namespace spmesl::metrics
