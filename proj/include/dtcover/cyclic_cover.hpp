#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "dtcover/curve_class.hpp"
#include "dtcover/dual_graph.hpp"
#include "dtcover/errors.hpp"
#include "dtcover/formal_series.hpp"

namespace dtcover {

/// m-fold cyclic cover of a dual graph cut along one loop.
///
/// Cover vertex (v, i) has index v*m + i and cover edge (e, i) has index
/// e*m + i.  Edge (e, i) over e: u -> w joins (u, i) and (w, i + cocycle(e)).
/// The lifted divisor lives on sheet `h_sheet` only.
struct CoverGraph {
    GraphRef base;
    LoopClass loop;
    int m = 1;
    int h_sheet = 0;
    GraphRef graph;
    std::vector<int> cocycle;  // per base edge

    std::size_t vertex(std::size_t base_vertex, int sheet) const {
        return base_vertex * static_cast<std::size_t>(m) + static_cast<std::size_t>(((sheet % m) + m) % m);
    }
    std::size_t base_vertex(std::size_t cover_vertex) const { return cover_vertex / static_cast<std::size_t>(m); }
    int sheet(std::size_t cover_vertex) const { return static_cast<int>(cover_vertex % static_cast<std::size_t>(m)); }

    /// Deck transformation (v, i) -> (v, i + g) applied to a cover class.
    CurveClass deck(const CurveClass& c, int g) const {
        graph->check_class(c);
        CurveClass out(c.size());
        for (std::size_t idx = 0; idx < c.size(); ++idx)
            if (c[idx]) out.at(vertex(base_vertex(idx), sheet(idx) + g)) = c[idx];
        return out;
    }
};

namespace detail {

inline void validate_loop(const DualGraph& g, const LoopClass& loop) {
    if (loop.walk.empty()) throw DomainError("empty loop");
    bool has_cut = false;
    for (const auto& s : loop.walk) {
        if (s.edge >= g.edge_count()) throw DomainError("loop references a missing edge");
        if (s.edge == loop.cut_edge) has_cut = true;
    }
    if (!has_cut) throw DomainError("cut edge is not on the loop");
    // Closed walk check.
    auto start_of = [&](const LoopClass::Step& s) { return s.direction > 0 ? g.edge(s.edge).tail : g.edge(s.edge).head; };
    auto end_of = [&](const LoopClass::Step& s) { return s.direction > 0 ? g.edge(s.edge).head : g.edge(s.edge).tail; };
    for (std::size_t i = 0; i < loop.walk.size(); ++i) {
        const auto& next = loop.walk[(i + 1) % loop.walk.size()];
        if (end_of(loop.walk[i]) != start_of(next)) throw DomainError("loop is not a closed walk");
    }
    std::vector<Edge> rest;
    for (std::size_t e = 0; e < g.edge_count(); ++e)
        if (e != loop.cut_edge) rest.push_back(g.edge(e));
    if (!DualGraph(g.vertices(), rest).is_connected())
        throw DomainError("removing the cut edge disconnects the graph");
}

}  // namespace detail

/// Builds the cover along `loop`; H-degrees are kept on sheet `h_sheet` and
/// set to zero on every other sheet.
inline CoverGraph build_cover(GraphRef base, const LoopClass& loop, int m, int h_sheet = 0) {
    if (m < 1) throw DomainError("cover degree must be positive");
    if (!base) throw ContextError("null base graph");
    detail::validate_loop(*base, loop);
    CoverGraph c;
    c.base = base;
    c.loop = loop;
    c.m = m;
    c.h_sheet = ((h_sheet % m) + m) % m;
    c.cocycle.assign(base->edge_count(), 0);
    c.cocycle[loop.cut_edge] = 1;
    std::vector<Vertex> vs;
    for (std::size_t v = 0; v < base->vertex_count(); ++v) {
        for (int i = 0; i < m; ++i) {
            Vertex x = base->vertex(v);
            x.name += "#" + std::to_string(i);
            if (i != c.h_sheet) x.h_deg = 0;
            vs.push_back(std::move(x));
        }
    }
    std::vector<Edge> es;
    for (std::size_t e = 0; e < base->edge_count(); ++e) {
        const auto& ed = base->edge(e);
        for (int i = 0; i < m; ++i) es.push_back({c.vertex(ed.tail, i), c.vertex(ed.head, i + c.cocycle[e])});
    }
    c.graph = std::make_shared<const DualGraph>(std::move(vs), std::move(es));
    return c;
}

inline CoverGraph build_cover(const DualGraph& base, const LoopClass& loop, int m, int h_sheet = 0) {
    return build_cover(std::make_shared<const DualGraph>(base), loop, m, h_sheet);
}

/// sigma_* : sum over each fiber.
inline CurveClass pushforward(const CoverGraph& c, const CurveClass& lifted) {
    c.graph->check_class(lifted);
    CurveClass out(c.base->vertex_count());
    for (std::size_t idx = 0; idx < lifted.size(); ++idx) out.at(c.base_vertex(idx)) += lifted[idx];
    return out;
}

/// gamma~ . H~ with H~ on the distinguished sheet.
inline std::int64_t lift_h_pairing(const CoverGraph& c, const CurveClass& lifted) {
    return c.graph->h_pairing(lifted);
}

struct Lift {
    CurveClass cls;
    int orbit_size = 1;  // number of deck translates when enumerated up to deck

    friend bool operator==(const Lift&, const Lift&) = default;
};

namespace detail {

inline void compositions(int total, int parts, bool positive, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
    if (parts == 0) {
        if (total == 0) out.push_back(cur);
        return;
    }
    const int lo = positive ? 1 : 0;
    const int hi = total - (positive ? parts - 1 : 0);
    if (parts == 1) {
        if (total >= lo) {
            cur.push_back(total);
            out.push_back(cur);
            cur.pop_back();
        }
        return;
    }
    for (int v = lo; v <= hi; ++v) {
        cur.push_back(v);
        compositions(total - v, parts - 1, positive, cur, out);
        cur.pop_back();
    }
}

inline std::vector<std::vector<int>> compositions(int total, int parts, bool positive) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    compositions(total, parts, positive, cur, out);
    return out;
}

inline bool support_connected(const DualGraph& g, const CurveClass& c) {
    return induced_subgraph(g, c.support()).graph.is_connected();
}

// Connected vertex sets of the cover lying over supp(gamma) with at most
// gamma(v) vertices over each v and meeting every fiber over supp(gamma).
// With `anchored`, only sets containing (v0, 0) are produced.
inline std::vector<std::vector<std::size_t>> connected_supports(const CoverGraph& c, const CurveClass& gamma,
                                                                bool anchored) {
    const auto& g = *c.graph;
    const auto supp = gamma.support();
    const auto v0 = supp.front();
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::vector<std::size_t>> frontier;
    for (int i = 0; i < (anchored ? 1 : c.m); ++i) {
        std::vector<std::size_t> s{c.vertex(v0, i)};
        if (seen.insert(s).second) frontier.push_back(s);
    }
    std::vector<std::vector<std::size_t>> result;
    const int budget = gamma.degree();
    while (!frontier.empty()) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& s : frontier) {
            std::vector<int> used(c.base->vertex_count(), 0);
            for (auto x : s) ++used[c.base_vertex(x)];
            bool covers = true;
            for (auto v : supp)
                if (used[v] == 0) covers = false;
            if (covers) result.push_back(s);
            if (static_cast<int>(s.size()) >= budget) continue;
            for (auto x : s) {
                for (auto e : g.incident(x)) {
                    const auto y = g.edge(e).other(x);
                    const auto by = c.base_vertex(y);
                    if (used[by] >= gamma[by]) continue;
                    if (std::binary_search(s.begin(), s.end(), y)) continue;
                    auto t = s;
                    t.insert(std::upper_bound(t.begin(), t.end(), y), y);
                    if (seen.insert(t).second) next.push_back(std::move(t));
                }
            }
        }
        frontier = std::move(next);
    }
    return result;
}

}  // namespace detail

/// Canonical deck-orbit representative (lexicographic minimum) and orbit size.
inline Lift deck_canonical(const CoverGraph& c, const CurveClass& lifted) {
    CurveClass best = lifted;
    int fixed = 0;
    for (int g = 0; g < c.m; ++g) {
        auto t = c.deck(lifted, g);
        if (t == lifted) ++fixed;
        if (t < best) best = std::move(t);
    }
    return {best, c.m / fixed};
}

/// All gamma~ on the cover with sigma_* gamma~ = gamma, sorted.
///
/// `connected_only` keeps lifts with connected support; `up_to_deck` keeps
/// one canonical representative per Z/m orbit and records the orbit size.
inline std::vector<Lift> enumerate_lifts(const CoverGraph& c, const CurveClass& gamma, bool connected_only,
                                         bool up_to_deck) {
    c.base->check_class(gamma);
    std::vector<Lift> lifts;
    if (gamma.is_zero()) return {Lift{c.graph->zero_class(), 1}};
    const std::size_t nb = c.base->vertex_count();

    if (connected_only) {
        for (const auto& s : detail::connected_supports(c, gamma, up_to_deck)) {
            std::vector<std::vector<std::size_t>> fiber(nb);
            for (auto x : s) fiber[c.base_vertex(x)].push_back(x);
            // Cartesian product of positive compositions per fiber.
            std::vector<std::vector<std::vector<int>>> options(nb);
            for (std::size_t v = 0; v < nb; ++v)
                if (gamma[v] > 0) options[v] = detail::compositions(gamma[v], static_cast<int>(fiber[v].size()), true);
            CurveClass cur = c.graph->zero_class();
            auto rec = [&](auto&& self, std::size_t v) -> void {
                if (v == nb) {
                    lifts.push_back({cur, 1});
                    return;
                }
                if (gamma[v] == 0) return self(self, v + 1);
                for (const auto& comp : options[v]) {
                    for (std::size_t j = 0; j < comp.size(); ++j) cur.at(fiber[v][j]) = comp[j];
                    self(self, v + 1);
                }
                for (auto x : fiber[v]) cur.at(x) = 0;
            };
            rec(rec, 0);
        }
    } else {
        std::vector<std::vector<std::vector<int>>> options(nb);
        for (std::size_t v = 0; v < nb; ++v) options[v] = detail::compositions(gamma[v], c.m, false);
        CurveClass cur = c.graph->zero_class();
        auto rec = [&](auto&& self, std::size_t v) -> void {
            if (v == nb) {
                lifts.push_back({cur, 1});
                return;
            }
            for (const auto& comp : options[v]) {
                for (int i = 0; i < c.m; ++i) cur.at(c.vertex(v, i)) = comp[static_cast<std::size_t>(i)];
                self(self, v + 1);
            }
        };
        rec(rec, 0);
    }

    if (up_to_deck) {
        std::set<CurveClass> reps;
        std::vector<Lift> out;
        for (const auto& l : lifts) {
            auto canon = deck_canonical(c, l.cls);
            if (reps.insert(canon.cls).second) out.push_back(std::move(canon));
        }
        lifts = std::move(out);
    }
    std::sort(lifts.begin(), lifts.end(), [](const Lift& a, const Lift& b) { return a.cls < b.cls; });
    return lifts;
}

/// Smallest odd integer strictly greater than d.
inline int standard_cover_degree(int d) {
    int m = d + 1;
    if (m % 2 == 0) ++m;
    return m;
}

}  // namespace dtcover
