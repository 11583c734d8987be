#pragma once
#include <spmesl/matrix.hpp>

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace spmesl::sim {

enum class NetworkKind { AR1, AR4, ScaleFree, Hub };

std::string_view to_string(NetworkKind k) noexcept;
/// Accepts `ar1`, `ar4`, `sf`, `hub`.
NetworkKind parse_network_kind(std::string_view s);

struct NetworkSpec
{
    NetworkKind kind = NetworkKind::AR1;
    std::size_t p = 100;
    std::uint64_t seed = 1;
    double alpha = 2.3;
    std::size_t subnetwork_size = 100;
    double magnitude_floor = 0.1;
};

/// Unordered pair stored with first < second.
using Edge = std::pair<std::size_t, std::size_t>;
using EdgeSet = std::vector<Edge>;

struct GroundTruth
{
    Matrix omega;
    Matrix sigma_cov;
    /// Sorted {(j, k) : j < k, omega(j, k) != 0}.
    EdgeSet edges;
    NetworkSpec spec;
};

/// Tridiagonal chain: 1 on the diagonal, 0.48 on the first off-diagonals.
GroundTruth ar1_precision(std::size_t p);

/// Banded: 0.6^{|i-j|} for |i-j| <= 4.
GroundTruth ar4_precision(std::size_t p);

/**
 * Preferential-attachment tree on `m_nodes` nodes: nodes 0-1-2 start as a
 * path, then each arriving node attaches one edge to an existing node chosen
 * with probability proportional to its current degree. `alpha` is validated
 * (> 1) but the attachment rule is the linear one.
 */
EdgeSet ba_graph(std::size_t m_nodes, double alpha, std::uint64_t seed);

/**
 * Hub subnetwork: m_nodes / 10 hubs with degree drawn from {14, 15, 16} and
 * the remaining nodes with degree in [1, 3]. Hub partners are drawn with
 * weight equal to their outstanding degree. Throws RetryExhausted if no
 * valid graph is found within the attempt budget.
 */
EdgeSet hub_graph(std::size_t m_nodes, std::uint64_t seed);

/**
 * Turn an edge set into a precision matrix: random weights from
 * U([-1, -0.5] u [0.5, 1]) on edges, each row's off-diagonals divided by
 * 1.5 times the row's off-diagonal absolute sum, each pair keeps the
 * smaller-magnitude of its two row-normalised values, unit
 * diagonal, and nonzero magnitudes below `magnitude_floor` raised to it.
 * The weights are redrawn with an incremented seed (up to 20 times) until
 * the result is positive definite; PDFailure otherwise.
 */
GroundTruth graph_to_precision(const EdgeSet& edges, std::size_t p, std::uint64_t seed,
                               double magnitude_floor = 0.1);

/// Dispatch on spec.kind (block-diagonal subnetworks for ScaleFree/Hub).
GroundTruth generate(const NetworkSpec& spec);

/// n draws from N(0, sigma_cov) using the Cholesky factor of sigma_cov.
Matrix sample_gaussian(const GroundTruth& truth, std::size_t n, std::uint64_t seed);

EdgeSet support_edges(const Matrix& omega);

struct TruthCheck
{
    bool symmetric = false;
    bool positive_definite = false;
    double inverse_error = 0.0; ///< max |omega * sigma_cov - I|
    bool support_consistent = false;
    bool block_diagonal = true;
};

TruthCheck check_truth(const GroundTruth& truth);

} // namespace spmesl::sim
