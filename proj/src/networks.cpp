#include <spmesl/networks.hpp>
#include <spmesl/errors.hpp>
#include <spmesl/rng.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spmesl::sim {

namespace {

using EMatrix = Eigen::Map<Eigen::MatrixXd>;
using CEMatrix = Eigen::Map<const Eigen::MatrixXd>;

CEMatrix view(const Matrix& m)
{
    return CEMatrix(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                    static_cast<Eigen::Index>(m.cols()));
}

EMatrix view(Matrix& m)
{
    return EMatrix(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                   static_cast<Eigen::Index>(m.cols()));
}

// Fills sigma_cov and edges. Returns false if omega is not positive definite.
bool finish(GroundTruth& t)
{
    const auto p = t.omega.rows();
    Eigen::LLT<Eigen::MatrixXd> llt(view(t.omega));
    if (llt.info() != Eigen::Success)
        return false;
    // A numerically singular factor is as bad as a failed one.
    const auto diag = llt.matrixLLT().diagonal();
    if (diag.minCoeff() <= 1e-12 * diag.maxCoeff())
        return false;
    t.sigma_cov = Matrix(p, p);
    view(t.sigma_cov) = llt.solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p),
                                                            static_cast<Eigen::Index>(p)));
    // Exact symmetry of the covariance.
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = j + 1; k < p; ++k) {
            const double v = 0.5 * (t.sigma_cov(j, k) + t.sigma_cov(k, j));
            t.sigma_cov(j, k) = v;
            t.sigma_cov(k, j) = v;
        }
    t.edges = support_edges(t.omega);
    return true;
}

GroundTruth banded(std::size_t p, std::size_t bandwidth, auto value)
{
    GroundTruth t;
    t.omega = Matrix(p, p);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < p; ++k) {
            const auto d = j > k ? j - k : k - j;
            if (d <= bandwidth)
                t.omega(j, k) = value(d);
        }
    if (!finish(t))
        throw PDFailure("banded precision matrix is not positive definite");
    return t;
}

std::size_t pick_weighted(Rng& rng, const std::vector<std::size_t>& candidates,
                          const std::vector<std::size_t>& weight)
{
    std::size_t total = 0;
    for (auto u : candidates)
        total += weight[u];
    auto r = rng.below(total);
    for (auto u : candidates) {
        if (r < weight[u])
            return u;
        r -= weight[u];
    }
    return candidates.back();
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng)
{
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.below(i)]);
}

bool try_hub_graph(std::size_t m, Rng& rng, EdgeSet& out)
{
    const std::size_t n_hubs = m / 10;
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);
    std::vector<bool> is_hub(m, false);
    std::vector<std::size_t> hubs(order.begin(), order.begin() + static_cast<long>(n_hubs));
    std::sort(hubs.begin(), hubs.end());
    for (auto h : hubs)
        is_hub[h] = true;

    std::vector<std::size_t> need(m, 1), degree(m, 0);
    for (auto h : hubs)
        need[h] = 14 + rng.below(3);
    std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
    out.clear();
    auto connect = [&](std::size_t a, std::size_t b) {
        adj[a][b] = adj[b][a] = 1;
        ++degree[a];
        ++degree[b];
        out.emplace_back(std::min(a, b), std::max(a, b));
    };

    std::vector<std::size_t> hub_order = hubs;
    shuffle(hub_order, rng);
    std::vector<std::size_t> candidates;
    for (auto h : hub_order) {
        while (need[h] > 0) {
            candidates.clear();
            for (std::size_t u = 0; u < m; ++u)
                if (u != h && !adj[h][u] && need[u] > 0)
                    candidates.push_back(u);
            std::size_t u;
            if (!candidates.empty()) {
                u = pick_weighted(rng, candidates, need);
                --need[u];
            } else {
                for (std::size_t v = 0; v < m; ++v)
                    if (!is_hub[v] && !adj[h][v] && degree[v] < 3)
                        candidates.push_back(v);
                if (candidates.empty())
                    return false;
                u = candidates[rng.below(candidates.size())];
            }
            --need[h];
            connect(h, u);
        }
    }

    std::vector<std::size_t> loners;
    for (std::size_t u = 0; u < m; ++u)
        if (!is_hub[u] && degree[u] == 0)
            loners.push_back(u);
    shuffle(loners, rng);
    for (auto u : loners) {
        if (degree[u] > 0)
            continue;
        candidates.clear();
        for (auto v : loners)
            if (v != u && degree[v] == 0)
                candidates.push_back(v);
        if (candidates.empty())
            for (std::size_t v = 0; v < m; ++v)
                if (v != u && !is_hub[v] && !adj[u][v] && degree[v] < 3)
                    candidates.push_back(v);
        if (candidates.empty())
            return false;
        connect(u, candidates[rng.below(candidates.size())]);
    }

    for (std::size_t u = 0; u < m; ++u) {
        const bool ok = is_hub[u] ? (degree[u] >= 14 && degree[u] <= 16)
                                  : (degree[u] >= 1 && degree[u] <= 3);
        if (!ok)
            return false;
    }
    std::sort(out.begin(), out.end());
    return true;
}

} // namespace

std::string_view to_string(NetworkKind k) noexcept
{
    switch (k) {
    case NetworkKind::AR1: return "ar1";
    case NetworkKind::AR4: return "ar4";
    case NetworkKind::ScaleFree: return "sf";
    case NetworkKind::Hub: return "hub";
    }
    return "ar1";
}

NetworkKind parse_network_kind(std::string_view s)
{
    if (s == "ar1") return NetworkKind::AR1;
    if (s == "ar4") return NetworkKind::AR4;
    if (s == "sf") return NetworkKind::ScaleFree;
    if (s == "hub") return NetworkKind::Hub;
    throw DomainError("unknown network kind '" + std::string(s) + "' (expected ar1|ar4|sf|hub)");
}

EdgeSet support_edges(const Matrix& omega)
{
    EdgeSet e;
    for (std::size_t j = 0; j < omega.rows(); ++j)
        for (std::size_t k = j + 1; k < omega.cols(); ++k)
            if (omega(j, k) != 0.0)
                e.emplace_back(j, k);
    return e;
}

GroundTruth ar1_precision(std::size_t p)
{
    if (p < 2)
        throw DomainError("AR(1) needs p >= 2");
    auto t = banded(p, 1, [](std::size_t d) { return d == 0 ? 1.0 : 0.48; });
    t.spec.kind = NetworkKind::AR1;
    t.spec.p = p;
    return t;
}

GroundTruth ar4_precision(std::size_t p)
{
    if (p < 5)
        throw DomainError("AR(4) needs p >= 5");
    auto t = banded(p, 4, [](std::size_t d) { return std::pow(0.6, static_cast<double>(d)); });
    t.spec.kind = NetworkKind::AR4;
    t.spec.p = p;
    return t;
}

EdgeSet ba_graph(std::size_t m_nodes, double alpha, std::uint64_t seed)
{
    if (m_nodes < 3)
        throw DomainError("BA graph needs at least 3 nodes");
    if (!(alpha > 1.0))
        throw DomainError("power-law exponent must exceed 1");
    Rng rng(seed);
    EdgeSet edges{{0, 1}, {1, 2}};
    // Every edge endpoint appears once, so a uniform pick is degree-weighted.
    std::vector<std::size_t> endpoints{0, 1, 1, 2};
    for (std::size_t v = 3; v < m_nodes; ++v) {
        const auto target = endpoints[rng.below(endpoints.size())];
        edges.emplace_back(target, v);
        endpoints.push_back(target);
        endpoints.push_back(v);
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

EdgeSet hub_graph(std::size_t m_nodes, std::uint64_t seed)
{
    if (m_nodes < 20 || m_nodes % 10 != 0)
        throw DomainError("hub subnetwork size must be a multiple of 10 and at least 20");
    constexpr std::size_t kAttempts = 50;
    EdgeSet edges;
    for (std::size_t attempt = 0; attempt < kAttempts; ++attempt) {
        Rng rng(derive_seed(seed, attempt));
        if (try_hub_graph(m_nodes, rng, edges))
            return edges;
    }
    throw RetryExhausted("hub graph: degree constraints not met after " +
                         std::to_string(kAttempts) + " attempts");
}

GroundTruth graph_to_precision(const EdgeSet& edges, std::size_t p, std::uint64_t seed,
                               double magnitude_floor)
{
    for (const auto& [a, b] : edges)
        if (a >= p || b >= p || a == b)
            throw DomainError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                              ") invalid for p = " + std::to_string(p));

    constexpr std::size_t kRetries = 20;
    for (std::size_t attempt = 0; attempt <= kRetries; ++attempt) {
        Rng rng(seed + attempt);
        Matrix w(p, p);
        for (const auto& [a, b] : edges) {
            const double mag = 0.5 + 0.5 * rng.uniform();
            const double v = rng.uniform() < 0.5 ? -mag : mag;
            w(a, b) = v;
            w(b, a) = v;
        }
        std::vector<double> row_sum(p, 0.0);
        for (std::size_t k = 0; k < p; ++k)
            for (std::size_t i = 0; i < p; ++i)
                if (i != k)
                    row_sum[i] += std::abs(w(i, k));

        GroundTruth t;
        t.omega = Matrix(p, p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t k = i + 1; k < p; ++k) {
                const double a = w(i, k) != 0.0 ? w(i, k) / (1.5 * row_sum[i]) : 0.0;
                const double b = w(k, i) != 0.0 ? w(k, i) / (1.5 * row_sum[k]) : 0.0;
                // Smaller of the two row-normalised values rather than their
                // mean: every row sum stays below 2/3, so the matrix is
                // diagonally dominant. Averaging leaves hubs with many leaf
                // neighbours indefinite whatever the weights.
                double v = std::abs(a) <= std::abs(b) ? a : b;
                if (v != 0.0 && std::abs(v) < magnitude_floor)
                    v = std::copysign(magnitude_floor, v);
                t.omega(i, k) = v;
                t.omega(k, i) = v;
            }
        for (std::size_t i = 0; i < p; ++i)
            t.omega(i, i) = 1.0;
        if (finish(t))
            return t;
    }
    throw PDFailure("precision matrix not positive definite after " +
                    std::to_string(kRetries) + " reweightings");
}

GroundTruth generate(const NetworkSpec& spec)
{
    GroundTruth t;
    switch (spec.kind) {
    case NetworkKind::AR1:
        t = ar1_precision(spec.p);
        break;
    case NetworkKind::AR4:
        t = ar4_precision(spec.p);
        break;
    case NetworkKind::ScaleFree:
    case NetworkKind::Hub: {
        const auto m = spec.subnetwork_size;
        if (m == 0 || spec.p % m != 0)
            throw DomainError("p = " + std::to_string(spec.p) +
                              " is not a multiple of the subnetwork size " + std::to_string(m));
        EdgeSet all;
        for (std::size_t b = 0; b < spec.p / m; ++b) {
            const auto block = spec.kind == NetworkKind::ScaleFree
                                   ? ba_graph(m, spec.alpha, derive_seed(spec.seed, 1, b))
                                   : hub_graph(m, derive_seed(spec.seed, 2, b));
            for (const auto& [a, c] : block)
                all.emplace_back(a + b * m, c + b * m);
        }
        std::sort(all.begin(), all.end());
        t = graph_to_precision(all, spec.p, derive_seed(spec.seed, 3), spec.magnitude_floor);
        break;
    }
    }
    t.spec = spec;
    return t;
}

Matrix sample_gaussian(const GroundTruth& truth, std::size_t n, std::uint64_t seed)
{
    const auto p = truth.sigma_cov.rows();
    Eigen::LLT<Eigen::MatrixXd> llt(view(truth.sigma_cov));
    if (llt.info() != Eigen::Success)
        throw PDFailure("covariance is not positive definite");
    Rng rng(seed);
    Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j)
            z(i, j) = rng.normal();
    Matrix x(n, p);
    view(x) = z * llt.matrixL().transpose();
    return x;
}

TruthCheck check_truth(const GroundTruth& truth)
{
    TruthCheck c;
    const auto& om = truth.omega;
    const auto p = om.rows();
    c.symmetric = om.cols() == p;
    for (std::size_t j = 0; j < p && c.symmetric; ++j)
        for (std::size_t k = j + 1; k < p; ++k)
            if (om(j, k) != om(k, j)) {
                c.symmetric = false;
                break;
            }
    Eigen::LLT<Eigen::MatrixXd> llt(view(om));
    c.positive_definite = llt.info() == Eigen::Success;
    const Eigen::MatrixXd prod = view(om) * view(truth.sigma_cov);
    c.inverse_error = (prod - Eigen::MatrixXd::Identity(prod.rows(), prod.cols())).cwiseAbs().maxCoeff();
    c.support_consistent = support_edges(om) == truth.edges;
    const auto kind = truth.spec.kind;
    if (kind == NetworkKind::ScaleFree || kind == NetworkKind::Hub) {
        const auto m = truth.spec.subnetwork_size;
        for (const auto& [a, b] : truth.edges)
            if (a / m != b / m)
                c.block_diagonal = false;
    }
    return c;
}

} // namespace spmesl::sim
