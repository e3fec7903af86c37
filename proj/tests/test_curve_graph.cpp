#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dtcover/dual_graph.hpp"

using namespace dtcover;

namespace {

// Union-find count of edges closing a cycle: the first Betti number.
int betti_oracle(const DualGraph& g) {
    std::vector<std::size_t> parent(g.vertex_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int closing = 0;
    for (const auto& e : g.edges()) {
        const auto a = find(e.tail), b = find(e.head);
        if (a == b) ++closing;
        else parent[a] = b;
    }
    return closing;
}

// Random connected multigraph: a random spanning tree plus extra edges.
DualGraph random_connected(std::mt19937& rng, int n, int extra) {
    std::vector<std::pair<int, int>> es;
    for (int v = 1; v < n; ++v) es.emplace_back(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
    std::uniform_int_distribution<int> any(0, n - 1);
    for (int i = 0; i < extra; ++i) es.emplace_back(any(rng), any(rng));
    std::shuffle(es.begin(), es.end(), rng);
    return make_graph(n, es);
}

// Same graph with vertices renamed by `perm`.
DualGraph relabel(const DualGraph& g, const std::vector<std::size_t>& perm) {
    std::vector<Vertex> vs(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) vs[perm[v]] = g.vertex(v);
    std::vector<Edge> es;
    for (const auto& e : g.edges()) es.push_back({perm[e.tail], perm[e.head]});
    return DualGraph(vs, es);
}

CurveClass relabel(const CurveClass& c, const std::vector<std::size_t>& perm) {
    CurveClass out(c.size());
    for (std::size_t v = 0; v < c.size(); ++v) out.at(perm[v]) = c[v];
    return out;
}

bool closed_walk(const DualGraph& g, const LoopClass& loop) {
    for (std::size_t i = 0; i < loop.walk.size(); ++i) {
        const auto& s = loop.walk[i];
        const auto& t = loop.walk[(i + 1) % loop.walk.size()];
        const auto end = s.direction > 0 ? g.edge(s.edge).head : g.edge(s.edge).tail;
        const auto start = t.direction > 0 ? g.edge(t.edge).tail : g.edge(t.edge).head;
        if (end != start) return false;
    }
    return true;
}

}  // namespace

TEST(DualGraph, ValidationErrors) {
    EXPECT_THROW(DualGraph({{"A", 0, 0, true}}, {}), ConfigError);   // omega_deg < 1
    EXPECT_THROW(DualGraph({{"A", 1, -1, true}}, {}), ConfigError);  // h_deg < 0
    EXPECT_THROW(DualGraph({{"A", 1, 0, true}}, {{0, 3}}), ConfigError);
    const auto g = make_chain(2);
    EXPECT_THROW(g.check_class(CurveClass{1}), ContextError);
    EXPECT_THROW(genus(DualGraph({{"A"}, {"B"}}, {})), DomainError);
}

TEST(DualGraph, SelfLoopIncidenceAndPairings) {
    const auto g = make_cycle(1, 2, 3);
    EXPECT_EQ(g.incident(0).size(), 1u);
    EXPECT_EQ(degrees(g)[0], 2);
    EXPECT_EQ(genus(g), 1);
    EXPECT_EQ(g.h_pairing(CurveClass{4}), 8);
    EXPECT_EQ(g.omega_pairing(CurveClass{4}), 12);
    EXPECT_EQ(g.find_vertex("C1"), std::optional<std::size_t>(0));
    EXPECT_EQ(g.find_vertex("nope"), std::nullopt);
}

TEST(DualGraph, GenusMatchesBettiOracleExhaustive) {
    std::mt19937 rng(1);
    for (int n = 1; n <= 6; ++n)
        for (int extra = 0; extra <= 4; ++extra)
            for (int rep = 0; rep < 10; ++rep) {
                const auto g = random_connected(rng, n, extra);
                EXPECT_EQ(genus(g), betti_oracle(g));
                EXPECT_EQ(static_cast<int>(cycle_basis(g).size()), genus(g));
            }
}

TEST(DualGraph, CycleBasisLoopsAreValid) {
    std::mt19937 rng(2);
    for (int rep = 0; rep < 60; ++rep) {
        const auto g = random_connected(rng, 1 + rep % 5, 1 + rep % 3);
        for (const auto& loop : cycle_basis(g)) {
            EXPECT_TRUE(closed_walk(g, loop));
            EXPECT_EQ(loop.walk.front().edge, loop.cut_edge);
            std::vector<Edge> rest;
            for (std::size_t e = 0; e < g.edge_count(); ++e)
                if (e != loop.cut_edge) rest.push_back(g.edge(e));
            EXPECT_TRUE(DualGraph(g.vertices(), rest).is_connected());
        }
    }
}

TEST(DualGraph, SupportSubgraph) {
    const auto g = make_cycle(3);
    const auto sub = support_subgraph(g, CurveClass{2, 0, 1});
    EXPECT_EQ(sub.graph.vertex_count(), 2u);
    EXPECT_EQ(sub.graph.edge_count(), 1u);  // edge C3 -> C1
    EXPECT_EQ(sub.restrict(CurveClass{2, 0, 1}), (CurveClass{2, 1}));
    EXPECT_EQ(sub.to_parent, (std::vector<std::size_t>{0, 2}));
}

TEST(Classify, Shapes) {
    EXPECT_EQ(classify(make_chain(3), CurveClass{1, 1, 1}).str(), "Chain(3)");
    EXPECT_EQ(classify(make_chain(3), CurveClass{1, 0, 1}).str(), "Disconnected");
    EXPECT_EQ(classify(make_cycle(1), CurveClass{2}).str(), "CycleI(1)");
    EXPECT_EQ(classify(make_cycle(3), CurveClass{1, 2, 1}).str(), "CycleI(3)");
    EXPECT_EQ(classify(make_cycle(3), CurveClass{1, 1, 0}).str(), "Chain(2)");
    const auto d4 = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
    EXPECT_EQ(classify(d4, CurveClass{1, 1, 1, 1}).str(), "ADE(D4)");
    const auto d5 = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {3, 4}});
    EXPECT_EQ(classify(d5, CurveClass{1, 1, 1, 1, 1}).str(), "ADE(D5)");
    const auto e6 = make_graph(6, {{0, 1}, {0, 2}, {2, 3}, {0, 4}, {4, 5}});
    EXPECT_EQ(classify(e6, CurveClass{1, 1, 1, 1, 1, 1}).str(), "ADE(E6)");
    const auto star5 = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    EXPECT_EQ(classify(star5, CurveClass{1, 1, 1, 1, 1}).str(), "GeneralTree");
    const auto theta = make_graph(2, {{0, 1}, {0, 1}, {0, 1}});
    EXPECT_EQ(classify(theta, CurveClass{1, 1}).str(), "HigherGenus");
    EXPECT_EQ(classify(make_graph(1, {{0, 0}, {0, 0}}), CurveClass{1}).str(), "HigherGenus");
    EXPECT_THROW(classify(make_chain(2), CurveClass{0, 0}), DomainError);
}

TEST(Classify, InvariantUnderRelabeling) {
    std::mt19937 rng(3);
    for (int rep = 0; rep < 80; ++rep) {
        const int n = 1 + rep % 6;
        const auto g = random_connected(rng, n, rep % 3);
        std::vector<int> coeffs(static_cast<std::size_t>(n));
        for (auto& c : coeffs) c = std::uniform_int_distribution<int>(0, 2)(rng);
        coeffs[0] = 1;
        const CurveClass c(coeffs);
        std::vector<std::size_t> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        EXPECT_EQ(classify(g, c), classify(relabel(g, perm), relabel(c, perm)));
        const auto sub = support_subgraph(g, c);
        if (sub.graph.is_connected() && genus(sub.graph) == 0) {
            const auto sub2 = support_subgraph(relabel(g, perm), relabel(c, perm));
            EXPECT_EQ(weighted_tree_key(sub.graph, sub.restrict(c)),
                      weighted_tree_key(sub2.graph, sub2.restrict(relabel(c, perm))));
        }
    }
}

TEST(WeightedTreeKey, DistinguishesWeights) {
    const auto d4 = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
    const auto k1 = weighted_tree_key(d4, CurveClass{2, 1, 1, 1});
    const auto k2 = weighted_tree_key(d4, CurveClass{1, 2, 1, 1});
    const auto k3 = weighted_tree_key(d4, CurveClass{1, 1, 2, 1});
    EXPECT_NE(k1, k2);
    EXPECT_EQ(k2, k3);
    const auto p4 = make_chain(4);
    EXPECT_EQ(weighted_tree_key(p4, CurveClass{1, 2, 3, 4}), weighted_tree_key(p4, CurveClass{4, 3, 2, 1}));
    EXPECT_NE(weighted_tree_key(p4, CurveClass{1, 2, 3, 4}), weighted_tree_key(p4, CurveClass{1, 3, 2, 4}));
    EXPECT_THROW(weighted_tree_key(make_cycle(2), CurveClass{1, 1}), DomainError);
}

TEST(ChainOrder, Paths) {
    const auto g = make_graph(3, {{2, 0}, {0, 1}});
    const auto order = chain_order(g);
    ASSERT_EQ(order.size(), 3u);
    EXPECT_TRUE((order == std::vector<std::size_t>{2, 0, 1}) || (order == std::vector<std::size_t>{1, 0, 2}));
    EXPECT_TRUE(chain_order(make_graph(4, {{0, 1}, {0, 2}, {0, 3}})).empty());
    EXPECT_TRUE(chain_order(make_graph(4, {{3, 0}, {3, 1}, {3, 2}})).empty());
    EXPECT_TRUE(chain_order(make_cycle(2)).empty());
    EXPECT_EQ(chain_order(make_chain(1)), (std::vector<std::size_t>{0}));
}
