#include <doctest.h>

#include <spmesl/errors.hpp>
#include <spmesl/networks.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

using namespace spmesl;
using namespace spmesl::sim;

namespace {

std::vector<std::size_t> degrees(const EdgeSet& e, std::size_t m)
{
    std::vector<std::size_t> d(m, 0);
    for (const auto& [a, b] : e) {
        ++d[a];
        ++d[b];
    }
    return d;
}

bool connected(const EdgeSet& e, std::size_t m)
{
    std::vector<std::size_t> parent(m);
    for (std::size_t i = 0; i < m; ++i)
        parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [a, b] : e)
        parent[find(a)] = find(b);
    for (std::size_t i = 1; i < m; ++i)
        if (find(i) != find(0))
            return false;
    return true;
}

bool all_valid(const TruthCheck& c)
{
    return c.symmetric && c.positive_definite && c.inverse_error <= 1e-8 && c.support_consistent &&
           c.block_diagonal;
}

} // namespace

TEST_CASE("AR(1) precision")
{
    const auto t = ar1_precision(3);
    CHECK(t.omega == Matrix::from_rows({{1, 0.48, 0}, {0.48, 1, 0.48}, {0, 0.48, 1}}));
    CHECK(ar1_precision(500).edges.size() == 499);
    CHECK(all_valid(check_truth(ar1_precision(500))));
    CHECK_THROWS_AS(ar1_precision(1), DomainError);
}

TEST_CASE("AR(4) precision")
{
    const auto t = ar4_precision(10);
    CHECK(t.omega(0, 2) == doctest::Approx(0.36).epsilon(1e-15));
    CHECK(t.omega(0, 5) == 0.0);
    CHECK(t.omega(0, 4) == doctest::Approx(0.1296).epsilon(1e-14));
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(t.omega(i, i) == 1.0);
    const auto big = ar4_precision(500);
    CHECK(big.edges.size() == 1990);
    CHECK(all_valid(check_truth(big)));
    CHECK_THROWS_AS(ar4_precision(4), DomainError);
}

TEST_CASE("BA graph")
{
    SUBCASE("three nodes are connected")
    {
        for (std::uint64_t s = 0; s < 10; ++s) {
            const auto e = ba_graph(3, 2.3, s);
            CHECK(e.size() >= 2);
            CHECK(connected(e, 3));
        }
    }
    SUBCASE("tree on m nodes, deterministic in the seed")
    {
        const auto e = ba_graph(100, 2.3, 5);
        CHECK(e.size() == 99);
        CHECK(connected(e, 100));
        CHECK(ba_graph(100, 2.3, 5) == e);
        CHECK(ba_graph(100, 2.3, 6) != e);
        for (const auto& [a, b] : e)
            CHECK(a < b);
    }
    SUBCASE("hubs emerge: max degree at least 5 in 90% of seeds")
    {
        int hits = 0;
        for (std::uint64_t s = 0; s < 100; ++s) {
            const auto d = degrees(ba_graph(100, 2.3, s), 100);
            hits += *std::max_element(d.begin(), d.end()) >= 5 ? 1 : 0;
        }
        CHECK(hits >= 90);
    }
    CHECK_THROWS_AS(ba_graph(2, 2.3, 1), DomainError);
    CHECK_THROWS_AS(ba_graph(10, 1.0, 1), DomainError);
}

TEST_CASE("hub graph degree constraints")
{
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto e = hub_graph(100, s);
        const auto d = degrees(e, 100);
        std::size_t hubs = 0;
        for (auto x : d) {
            if (x >= 14) {
                ++hubs;
                CHECK(x <= 16);
            } else {
                CHECK(x >= 1);
                CHECK(x <= 3);
            }
        }
        CHECK(hubs == 10);
        CHECK(e.size() >= 75);
        CHECK(e.size() <= 135);
        // No duplicate edges.
        auto sorted = e;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
    // Smaller subnetworks keep one hub per ten nodes.
    const auto d = degrees(hub_graph(50, 3), 50);
    CHECK(std::count_if(d.begin(), d.end(), [](auto x) { return x >= 14; }) == 5);
    CHECK_THROWS_AS(hub_graph(55, 1), DomainError);
    CHECK(hub_graph(100, 9) == hub_graph(100, 9));
}

TEST_CASE("graph_to_precision")
{
    SUBCASE("empty edge set gives the identity")
    {
        CHECK(graph_to_precision({}, 4, 1).omega == Matrix::identity(4));
    }
    SUBCASE("single edge has magnitude two thirds")
    {
        for (std::uint64_t s = 0; s < 10; ++s) {
            const auto t = graph_to_precision({{0, 1}}, 3, s);
            // |U| / (1.5 |U|) from either endpoint.
            CHECK(std::abs(t.omega(0, 1)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
            CHECK(t.omega(0, 1) == t.omega(1, 0));
            CHECK(t.omega(0, 0) == 1.0);
            CHECK(t.omega(0, 2) == 0.0);
        }
    }
    SUBCASE("support is preserved and small magnitudes are floored")
    {
        const auto e = ba_graph(100, 2.3, 11);
        const auto t = graph_to_precision(e, 100, 12);
        auto sorted = e;
        std::sort(sorted.begin(), sorted.end());
        CHECK(t.edges == sorted);
        CHECK(support_edges(t.omega) == sorted);
        for (const auto& [a, b] : e)
            CHECK(std::abs(t.omega(a, b)) >= 0.1);
        CHECK(all_valid(check_truth(t)));
    }
    SUBCASE("hopeless flooring exhausts the retry budget")
    {
        EdgeSet k8;
        for (std::size_t a = 0; a < 8; ++a)
            for (std::size_t b = a + 1; b < 8; ++b)
                k8.emplace_back(a, b);
        CHECK_THROWS_AS(graph_to_precision(k8, 8, 1, 0.95), PDFailure);
    }
    CHECK_THROWS_AS(graph_to_precision({{0, 3}}, 3, 1), DomainError);
}

TEST_CASE("generate: block structure and edge counts at p = 500")
{
    NetworkSpec sf{NetworkKind::ScaleFree, 500, 7};
    const auto t = generate(sf);
    CHECK(t.edges.size() == 495); // five trees of 100 nodes
    CHECK(all_valid(check_truth(t)));
    for (const auto& [a, b] : t.edges)
        CHECK(a / 100 == b / 100);

    NetworkSpec hub{NetworkKind::Hub, 500, 7};
    const auto h = generate(hub);
    CHECK(std::abs(static_cast<double>(h.edges.size()) - 551.0) <= 0.15 * 551.0);
    CHECK(all_valid(check_truth(h)));

    NetworkSpec bad{NetworkKind::Hub, 250, 7};
    CHECK_THROWS_AS(generate(bad), DomainError);
    NetworkSpec bad_alpha{NetworkKind::ScaleFree, 100, 7, 0.5};
    CHECK_THROWS_AS(generate(bad_alpha), DomainError);
}

TEST_CASE("generate is a pure function of its NetworkSpec")
{
    for (auto kind : {NetworkKind::AR1, NetworkKind::AR4, NetworkKind::ScaleFree, NetworkKind::Hub}) {
        NetworkSpec s{kind, 200, 42};
        CHECK(generate(s).omega == generate(s).omega);
        CHECK(parse_network_kind(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_network_kind("er"), DomainError);
}

TEST_CASE("check_truth detects broken matrices")
{
    auto t = ar1_precision(5);
    t.omega(0, 1) = 0.3;
    const auto c = check_truth(t);
    CHECK_FALSE(c.symmetric);
    auto u = ar1_precision(5);
    u.edges.pop_back();
    CHECK_FALSE(check_truth(u).support_consistent);
}

TEST_CASE("sample_gaussian")
{
    const auto t = ar1_precision(5);
    const auto X = sample_gaussian(t, 100000, 3);
    CHECK(X.rows() == 100000);
    CHECK(X.cols() == 5);
    Eigen::Map<const Eigen::MatrixXd> M(X.data().data(), 100000, 5);
    const Eigen::MatrixXd S = (M.transpose() * M) / 100000.0;
    Eigen::Map<const Eigen::MatrixXd> Sigma(t.sigma_cov.data().data(), 5, 5);
    CHECK((S - Sigma).cwiseAbs().maxCoeff() < 0.05);

    CHECK(sample_gaussian(t, 10, 4) == sample_gaussian(t, 10, 4));
    CHECK_FALSE(sample_gaussian(t, 10, 4) == sample_gaussian(t, 10, 5));
    CHECK(sample_gaussian(t, 1, 4).rows() == 1);
}
