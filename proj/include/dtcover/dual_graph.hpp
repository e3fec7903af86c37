#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "dtcover/curve_class.hpp"
#include "dtcover/errors.hpp"

namespace dtcover {

/// A P^1 component of the configuration.
struct Vertex {
    std::string name;
    int omega_deg = 1;  // omega . C_i
    int h_deg = 0;      // H . C_i
    bool rational = true;

    friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// A node.  `tail` carries half-edge 0 and `head` half-edge 1; for a
/// self-node these are the two preimages on the normalization.
struct Edge {
    std::size_t tail = 0;
    std::size_t head = 0;

    bool is_loop() const { return tail == head; }
    std::size_t other(std::size_t v) const { return v == tail ? head : tail; }

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Dual graph of a nodal rational curve: a multigraph with self-loops.
/// Immutable after construction; connectivity is computed once.
class DualGraph {
public:
    DualGraph() = default;
    DualGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
        : vertices_(std::move(vertices)), edges_(std::move(edges)) {
        for (const auto& v : vertices_)
            if (v.omega_deg < 1) throw ConfigError("omega degree of '" + v.name + "' must be positive");
        for (const auto& v : vertices_)
            if (v.h_deg < 0) throw ConfigError("h degree of '" + v.name + "' must be non-negative");
        incident_.resize(vertices_.size());
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const auto& ed = edges_[e];
            if (ed.tail >= vertices_.size() || ed.head >= vertices_.size())
                throw ConfigError("edge references a missing vertex");
            incident_[ed.tail].push_back(e);
            if (!ed.is_loop()) incident_[ed.head].push_back(e);
        }
        connected_ = compute_connected();
    }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Vertex& vertex(std::size_t i) const { return vertices_.at(i); }
    const Edge& edge(std::size_t i) const { return edges_.at(i); }
    const std::vector<std::size_t>& incident(std::size_t v) const { return incident_.at(v); }
    bool is_connected() const { return connected_; }

    std::optional<std::size_t> find_vertex(const std::string& name) const {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (vertices_[i].name == name) return i;
        return std::nullopt;
    }

    CurveClass zero_class() const { return CurveClass(vertices_.size()); }

    /// omega . gamma
    std::int64_t omega_pairing(const CurveClass& c) const {
        check_class(c);
        std::int64_t s = 0;
        for (std::size_t i = 0; i < c.size(); ++i) s += std::int64_t{c[i]} * vertices_[i].omega_deg;
        return s;
    }

    /// gamma . H
    std::int64_t h_pairing(const CurveClass& c) const {
        check_class(c);
        std::int64_t s = 0;
        for (std::size_t i = 0; i < c.size(); ++i) s += std::int64_t{c[i]} * vertices_[i].h_deg;
        return s;
    }

    void check_class(const CurveClass& c) const {
        if (c.size() != vertices_.size())
            throw ContextError("class has " + std::to_string(c.size()) + " coefficients, graph has " +
                               std::to_string(vertices_.size()) + " components");
    }

    friend bool operator==(const DualGraph& a, const DualGraph& b) {
        return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
    }

private:
    bool compute_connected() const {
        if (vertices_.empty()) return true;
        std::vector<char> seen(vertices_.size(), 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (auto e : incident_[v]) {
                const auto w = edges_[e].other(v);
                if (!seen[w]) {
                    seen[w] = 1;
                    ++count;
                    stack.push_back(w);
                }
            }
        }
        return count == vertices_.size();
    }

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> incident_;
    bool connected_ = true;
};

/// Arithmetic genus delta_n - delta_c + 1 = b_1 of a connected dual graph.
inline int genus(const DualGraph& g) {
    if (!g.is_connected()) throw DomainError("genus of a disconnected dual graph");
    if (g.vertex_count() == 0) throw DomainError("genus of an empty dual graph");
    return static_cast<int>(g.edge_count()) - static_cast<int>(g.vertex_count()) + 1;
}

/// Oriented closed walk in the dual graph, with a distinguished edge whose
/// removal keeps the graph connected.
struct LoopClass {
    struct Step {
        std::size_t edge;
        int direction;  // +1 along tail->head, -1 against

        friend bool operator==(const Step&, const Step&) = default;
    };
    std::vector<Step> walk;
    std::size_t cut_edge = 0;

    std::vector<std::size_t> vertices(const DualGraph& g) const {
        std::vector<std::size_t> vs;
        for (const auto& s : walk) {
            vs.push_back(g.edge(s.edge).tail);
            vs.push_back(g.edge(s.edge).head);
        }
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }

    friend bool operator==(const LoopClass&, const LoopClass&) = default;
};

namespace detail {

struct SpanningTree {
    std::vector<char> in_tree;                 // per edge
    std::vector<std::optional<std::size_t>> parent_edge;  // per vertex
    std::vector<std::size_t> depth;
};

inline SpanningTree bfs_tree(const DualGraph& g, std::size_t root) {
    SpanningTree t;
    t.in_tree.assign(g.edge_count(), 0);
    t.parent_edge.assign(g.vertex_count(), std::nullopt);
    t.depth.assign(g.vertex_count(), 0);
    std::vector<char> seen(g.vertex_count(), 0);
    std::queue<std::size_t> q;
    q.push(root);
    seen[root] = 1;
    while (!q.empty()) {
        const auto v = q.front();
        q.pop();
        for (auto e : g.incident(v)) {
            const auto w = g.edge(e).other(v);
            if (seen[w]) continue;
            seen[w] = 1;
            t.in_tree[e] = 1;
            t.parent_edge[w] = e;
            t.depth[w] = t.depth[v] + 1;
            q.push(w);
        }
    }
    return t;
}

// Tree walk from `from` to `to` through their lowest common ancestor.
inline std::vector<LoopClass::Step> tree_path(const DualGraph& g, const SpanningTree& t, std::size_t from,
                                              std::size_t to) {
    std::vector<LoopClass::Step> up_from;
    std::vector<LoopClass::Step> up_to;
    auto a = from;
    auto b = to;
    while (a != b) {
        if (t.depth[a] >= t.depth[b]) {
            const auto e = *t.parent_edge[a];
            const int dir = g.edge(e).tail == a ? +1 : -1;
            up_from.push_back({e, dir});
            a = g.edge(e).other(a);
        } else {
            const auto e = *t.parent_edge[b];
            const int dir = g.edge(e).tail == b ? -1 : +1;
            up_to.push_back({e, dir});
            b = g.edge(e).other(b);
        }
    }
    std::reverse(up_to.begin(), up_to.end());
    up_from.insert(up_from.end(), up_to.begin(), up_to.end());
    return up_from;
}

}  // namespace detail

/// Spanning-tree cycle basis rooted at `root`: one loop per non-tree edge,
/// each cut along its own non-tree edge.
inline std::vector<LoopClass> cycle_basis(const DualGraph& g, std::size_t root = 0) {
    if (!g.is_connected()) throw DomainError("cycle basis of a disconnected dual graph");
    if (g.vertex_count() == 0) return {};
    const auto t = detail::bfs_tree(g, root);
    std::vector<LoopClass> loops;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (t.in_tree[e]) continue;
        LoopClass loop;
        loop.cut_edge = e;
        loop.walk.push_back({e, +1});
        const auto back = detail::tree_path(g, t, g.edge(e).head, g.edge(e).tail);
        loop.walk.insert(loop.walk.end(), back.begin(), back.end());
        loops.push_back(std::move(loop));
    }
    return loops;
}

/// Induced subgraph on a vertex set together with the index maps both ways.
struct Subgraph {
    DualGraph graph;
    std::vector<std::size_t> to_parent;  // sub vertex -> parent vertex
    std::vector<std::size_t> edge_to_parent;

    CurveClass restrict(const CurveClass& parent_class) const {
        CurveClass c(to_parent.size());
        for (std::size_t i = 0; i < to_parent.size(); ++i) c.at(i) = parent_class[to_parent[i]];
        return c;
    }
};

inline Subgraph induced_subgraph(const DualGraph& g, std::vector<std::size_t> keep) {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<std::optional<std::size_t>> index(g.vertex_count());
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        index.at(keep[i]) = i;
        vs.push_back(g.vertex(keep[i]));
    }
    std::vector<Edge> es;
    std::vector<std::size_t> emap;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edge(e);
        if (index[ed.tail] && index[ed.head]) {
            es.push_back({*index[ed.tail], *index[ed.head]});
            emap.push_back(e);
        }
    }
    return Subgraph{DualGraph(std::move(vs), std::move(es)), std::move(keep), std::move(emap)};
}

inline Subgraph support_subgraph(const DualGraph& g, const CurveClass& c) {
    g.check_class(c);
    return induced_subgraph(g, c.support());
}

// ---------------------------------------------------------------------------
// Classification of supports.

enum class ShapeKind { Chain, CycleI, AdeTree, GeneralTree, HigherGenus, Disconnected };

struct Classification {
    ShapeKind kind = ShapeKind::GeneralTree;
    int size = 0;          // N for Chain(N) / CycleI(N); vertex count otherwise
    char ade_family = 0;   // 'D' or 'E' for AdeTree

    std::string str() const {
        switch (kind) {
            case ShapeKind::Chain: return "Chain(" + std::to_string(size) + ")";
            case ShapeKind::CycleI: return "CycleI(" + std::to_string(size) + ")";
            case ShapeKind::AdeTree: return std::string("ADE(") + ade_family + std::to_string(size) + ")";
            case ShapeKind::GeneralTree: return "GeneralTree";
            case ShapeKind::HigherGenus: return "HigherGenus";
            case ShapeKind::Disconnected: return "Disconnected";
        }
        return "?";
    }

    friend bool operator==(const Classification&, const Classification&) = default;
};

/// Degree with self-loops counted twice.
inline std::vector<int> degrees(const DualGraph& g) {
    std::vector<int> deg(g.vertex_count(), 0);
    for (const auto& e : g.edges()) {
        ++deg[e.tail];
        ++deg[e.head];
    }
    return deg;
}

namespace detail {

inline Classification classify_tree(const DualGraph& t) {
    const auto deg = degrees(t);
    const int n = static_cast<int>(t.vertex_count());
    const int max_deg = n ? *std::max_element(deg.begin(), deg.end()) : 0;
    if (max_deg <= 2) return {ShapeKind::Chain, n, 0};
    std::vector<std::size_t> branch_points;
    for (std::size_t v = 0; v < deg.size(); ++v)
        if (deg[v] >= 3) branch_points.push_back(v);
    if (branch_points.size() != 1 || max_deg != 3) return {ShapeKind::GeneralTree, n, 0};
    // Arm lengths from the unique trivalent vertex.
    const auto center = branch_points.front();
    std::vector<int> arms;
    for (auto e : t.incident(center)) {
        std::size_t prev = center;
        std::size_t cur = t.edge(e).other(center);
        int len = 1;
        while (deg[cur] == 2) {
            std::size_t next = cur;
            for (auto f : t.incident(cur)) {
                const auto w = t.edge(f).other(cur);
                if (w != prev) next = w;
            }
            prev = cur;
            cur = next;
            ++len;
        }
        arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] == 1 && arms[1] == 1) return {ShapeKind::AdeTree, n, 'D'};
    if (arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4) return {ShapeKind::AdeTree, n, 'E'};
    return {ShapeKind::GeneralTree, n, 0};
}

}  // namespace detail

/// Shape of the subgraph induced by supp(gamma).
inline Classification classify(const DualGraph& g, const CurveClass& support) {
    g.check_class(support);
    if (support.is_zero()) throw DomainError("classify needs a nonempty support");
    const auto sub = support_subgraph(g, support);
    const auto& s = sub.graph;
    if (!s.is_connected()) return {ShapeKind::Disconnected, static_cast<int>(s.vertex_count()), 0};
    const int gen = genus(s);
    if (gen == 0) return detail::classify_tree(s);
    const auto deg = degrees(s);
    if (gen == 1 && std::all_of(deg.begin(), deg.end(), [](int d) { return d == 2; }))
        return {ShapeKind::CycleI, static_cast<int>(s.vertex_count()), 0};
    return {ShapeKind::HigherGenus, static_cast<int>(s.vertex_count()), 0};
}

/// Chain order of a path graph (endpoint first); empty if not a chain.
inline std::vector<std::size_t> chain_order(const DualGraph& t) {
    if (t.vertex_count() == 0 || !t.is_connected() || genus(t) != 0) return {};
    const auto deg = degrees(t);
    if (std::any_of(deg.begin(), deg.end(), [](auto d) { return d > 2; })) return {};
    const auto start = static_cast<std::size_t>(
        std::find_if(deg.begin(), deg.end(), [](auto d) { return d <= 1; }) - deg.begin());
    std::vector<std::size_t> order{start};
    std::size_t prev = start;
    std::size_t cur = start;
    while (order.size() < t.vertex_count()) {
        std::size_t next = cur;
        for (auto e : t.incident(cur)) {
            const auto w = t.edge(e).other(cur);
            if (w != prev) next = w;
        }
        prev = cur;
        cur = next;
        order.push_back(cur);
    }
    return order;
}

// ---------------------------------------------------------------------------
// Divisibility bookkeeping for (n, gamma).

struct ClassArith {
    int d = 0;
    int l = 0;
    int gcd_gamma = 0;
    int gcd_n_gamma = 0;
    bool is_primitive = false;
    std::vector<int> divisors;
};

inline std::vector<int> divisors_of(int value) {
    std::vector<int> out;
    for (int k = 1; k <= value; ++k)
        if (value % k == 0) out.push_back(k);
    return out;
}

inline ClassArith class_arith(const CurveClass& gamma, std::int64_t n) {
    if (gamma.is_zero()) throw DomainError("class arithmetic of the zero class");
    ClassArith r;
    r.d = gamma.degree();
    r.l = gamma.length();
    r.gcd_gamma = gamma.content();
    r.gcd_n_gamma = static_cast<int>(std::gcd(static_cast<std::int64_t>(r.gcd_gamma), n < 0 ? -n : n));
    r.is_primitive = r.gcd_gamma == 1;
    r.divisors = divisors_of(r.gcd_n_gamma);
    return r;
}

// ---------------------------------------------------------------------------
// Standard configurations.

/// Type I_N: one nodal P^1 (N = 1) or a circle of N copies of P^1.
inline DualGraph make_cycle(int n, int h_deg = 1, int omega_deg = 1) {
    if (n < 1) throw DomainError("I_N needs N >= 1");
    std::vector<Vertex> vs;
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i) vs.push_back({"C" + std::to_string(i + 1), omega_deg, h_deg, true});
    for (int i = 0; i < n; ++i)
        es.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>((i + 1) % n)});
    return DualGraph(std::move(vs), std::move(es));
}

/// Chain of n copies of P^1 (Dynkin A_n).
inline DualGraph make_chain(int n, int h_deg = 1, int omega_deg = 1) {
    if (n < 1) throw DomainError("chain needs at least one component");
    std::vector<Vertex> vs;
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i) vs.push_back({"C" + std::to_string(i + 1), omega_deg, h_deg, true});
    for (int i = 0; i + 1 < n; ++i) es.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1)});
    return DualGraph(std::move(vs), std::move(es));
}

/// Graph from an edge list on vertices 0..n-1 with uniform decorations.
inline DualGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges, int h_deg = 1,
                            int omega_deg = 1) {
    std::vector<Vertex> vs;
    for (int i = 0; i < n; ++i) vs.push_back({"C" + std::to_string(i + 1), omega_deg, h_deg, true});
    std::vector<Edge> es;
    for (auto [u, v] : edges) es.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
    return DualGraph(std::move(vs), std::move(es));
}

// ---------------------------------------------------------------------------
// Canonical form of a weighted tree (AHU encoding from the center).

namespace detail {

inline std::string rooted_code(const DualGraph& t, const CurveClass& w, std::size_t v, std::size_t parent) {
    std::vector<std::string> kids;
    for (auto e : t.incident(v)) {
        const auto u = t.edge(e).other(v);
        if (u == parent) continue;
        kids.push_back(rooted_code(t, w, u, v));
    }
    std::sort(kids.begin(), kids.end());
    std::string s = "(" + std::to_string(w[v]);
    for (const auto& k : kids) s += k;
    return s + ")";
}

}  // namespace detail

/// Isomorphism-invariant key of (tree, class).  Equal keys iff there is a
/// weight-preserving tree isomorphism.
inline std::string weighted_tree_key(const DualGraph& t, const CurveClass& w) {
    if (t.vertex_count() == 0 || !t.is_connected() || genus(t) != 0)
        throw DomainError("weighted_tree_key needs a tree");
    t.check_class(w);
    // Find the center(s) by peeling leaves.
    auto deg = degrees(t);
    std::vector<std::size_t> layer;
    std::vector<char> removed(t.vertex_count(), 0);
    for (std::size_t v = 0; v < deg.size(); ++v)
        if (deg[v] <= 1) layer.push_back(v);
    std::size_t left = t.vertex_count();
    while (left > 2) {
        std::vector<std::size_t> next;
        for (auto v : layer) {
            removed[v] = 1;
            --left;
            for (auto e : t.incident(v)) {
                const auto u = t.edge(e).other(v);
                if (!removed[u] && --deg[u] == 1) next.push_back(u);
            }
        }
        layer = std::move(next);
    }
    std::vector<std::string> codes;
    for (std::size_t v = 0; v < t.vertex_count(); ++v)
        if (!removed[v]) codes.push_back(detail::rooted_code(t, w, v, v));
    if (codes.size() == 2) {
        // Bicentral: root at the central edge, both halves.
        std::vector<std::size_t> c;
        for (std::size_t v = 0; v < t.vertex_count(); ++v)
            if (!removed[v]) c.push_back(v);
        auto a = detail::rooted_code(t, w, c[0], c[1]);
        auto b = detail::rooted_code(t, w, c[1], c[0]);
        if (b < a) std::swap(a, b);
        return "E" + a + b;
    }
    return "V" + codes.front();
}

}  // namespace dtcover
