#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dtcover/curve_class.hpp"
#include "dtcover/cyclic_cover.hpp"
#include "dtcover/dual_graph.hpp"
#include "dtcover/errors.hpp"
#include "dtcover/rational.hpp"

namespace dtcover {

enum class GeometryKind { SuperRigid, SurfaceType };
enum class WeightKind { Behrend, Euler };

inline std::string to_string(GeometryKind k) { return k == GeometryKind::SuperRigid ? "super-rigid" : "surface-type"; }
inline std::string to_string(WeightKind w) { return w == WeightKind::Behrend ? "behrend" : "euler"; }

// ---------------------------------------------------------------------------
// Genus-zero table N_{1, gamma}.

enum class Provenance { ClosedForm, Descent, UserSupplied };

inline std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::ClosedForm: return "closed-form";
        case Provenance::Descent: return "descent";
        case Provenance::UserSupplied: return "user-supplied";
    }
    return "?";
}

/// Values N_{1, gamma} on one graph.  Classes with disconnected support are
/// zero and never stored; classes up to `complete_degree` that are absent
/// are zero as well.  Anything else is missing data.
class GvTable {
public:
    struct Entry {
        Rational value;
        Provenance provenance = Provenance::UserSupplied;
    };

    explicit GvTable(GraphRef graph, int complete_degree = 0)
        : graph_(std::move(graph)), complete_degree_(complete_degree) {}

    const GraphRef& graph() const { return graph_; }
    int complete_degree() const { return complete_degree_; }
    void set_complete_degree(int d) { complete_degree_ = d; }
    const std::map<CurveClass, Entry>& entries() const { return entries_; }

    void set(const CurveClass& gamma, const Rational& value, Provenance p) {
        graph_->check_class(gamma);
        if (gamma.is_zero()) throw DomainError("GV table entry for the zero class");
        if (!detail::support_connected(*graph_, gamma)) {
            if (!value.is_zero()) throw DomainError("nonzero GV value on disconnected support " + gamma.str());
            return;
        }
        if (value.is_zero()) {
            entries_.erase(gamma);
            return;
        }
        entries_[gamma] = Entry{value, p};
    }

    Rational lookup(const CurveClass& gamma) const {
        graph_->check_class(gamma);
        if (auto it = entries_.find(gamma); it != entries_.end()) return it->second.value;
        if (gamma.is_zero() || !detail::support_connected(*graph_, gamma)) return Rational(0);
        if (gamma.degree() <= complete_degree_) return Rational(0);
        throw MissingDataError("GV table has no value for gamma = (" + gamma.str() + ")");
    }

    /// The table as a plain lookup function.
    std::function<Rational(const CurveClass&)> as_lookup() const {
        return [this](const CurveClass& c) { return lookup(c); };
    }

private:
    GraphRef graph_;
    int complete_degree_;
    std::map<CurveClass, Entry> entries_;
};

using GvLookup = std::function<Rational(const CurveClass&)>;

/// sum_{k | (n, gamma)} N_{1, gamma/k} / k^2.
inline Rational multiple_cover_eval(std::int64_t n, const CurveClass& gamma, const GvLookup& n1) {
    const auto ar = class_arith(gamma, n);
    Rational s;
    for (int k : ar.divisors) s += inverse_square(k) * n1(gamma.divided_by(k));
    return s;
}

inline Rational multiple_cover_eval(std::int64_t n, const CurveClass& gamma, const GvTable& table) {
    return multiple_cover_eval(n, gamma, table.as_lookup());
}

// ---------------------------------------------------------------------------
// Closed forms.

/// N_{n, a_1 C_1 + ... + a_N C_N} on a chain of P^1 with full support:
/// +-1/k^2 when all a_i equal k and k | n, zero otherwise.
inline Rational base_chain(std::int64_t n, const std::vector<int>& a, GeometryKind kind) {
    if (a.empty()) throw DomainError("base_chain needs a nonempty chain class");
    for (int x : a)
        if (x < 1) throw DomainError("base_chain needs full support (all coefficients >= 1)");
    const int k = a.front();
    for (int x : a)
        if (x != k) return Rational(0);
    if (n % k != 0) return Rational(0);
    const Rational v = inverse_square(k);
    return kind == GeometryKind::SuperRigid ? v : -v;
}

/// N_{n, m(C_1 + ... + C_N)} on a type I_N curve.
inline Rational type_IN_closed_form(int cycle_length, int m, std::int64_t n, GeometryKind kind) {
    if (cycle_length < 1 || m < 1) throw DomainError("type_IN_closed_form needs N >= 1 and m >= 1");
    Rational s;
    for (int k : class_arith(CurveClass{m}, n).divisors) s += Rational(cycle_length, std::int64_t{k} * k);
    return kind == GeometryKind::SuperRigid ? s : -s;
}

/// Euler-characteristic invariants of a single (-1,-1)-curve, n in {0, 1}.
inline Rational euler_variant_rigid_m1m1(std::int64_t n, int m) {
    if (m < 1) throw DomainError("multiplicity must be positive");
    if (n == 0) return Rational(m % 2 == 1 ? 1 : -1, std::int64_t{m} * m);
    if (n == 1) return Rational(m == 1 ? 1 : 0);
    throw UnsupportedError("Euler invariants of a (-1,-1)-curve are only known for n = 0, 1");
}

// ---------------------------------------------------------------------------
// Structural vanishing.

struct VanishingDecision {
    enum class Kind { Zero, DelegateToN1, NoDecision };
    Kind kind = Kind::NoDecision;
    std::string reason;
};

inline VanishingDecision vanishing_rules(const DualGraph& g, const CurveClass& gamma, std::int64_t /*n*/) {
    g.check_class(gamma);
    if (gamma.is_zero()) throw DomainError("vanishing rules need a nonzero class");
    for (auto v : gamma.support())
        if (!g.vertex(v).rational) return {VanishingDecision::Kind::Zero, "non-rational component"};
    if (!detail::support_connected(g, gamma)) return {VanishingDecision::Kind::Zero, "disconnected support"};
    if (gamma.content() == 1) return {VanishingDecision::Kind::DelegateToN1, "primitive class"};
    return {};
}

// ---------------------------------------------------------------------------
// Tree base values.

/// Tree base case lookup: (tree, class on it, n, geometry) -> value.
using BaseProvider =
    std::function<std::optional<Rational>(const DualGraph&, const CurveClass&, std::int64_t, GeometryKind)>;

/// User-supplied values on trees, matched up to weighted tree isomorphism.
class BaseTable {
public:
    void add(const DualGraph& tree, const CurveClass& gamma, std::optional<std::int64_t> n, const Rational& value) {
        entries_[{weighted_tree_key(tree, gamma), n}] = value;
    }

    std::optional<Rational> find(const DualGraph& tree, const CurveClass& gamma, std::int64_t n) const {
        const auto key = weighted_tree_key(tree, gamma);
        if (auto it = entries_.find({key, n}); it != entries_.end()) return it->second;
        if (auto it = entries_.find({key, std::nullopt}); it != entries_.end()) return it->second;
        return std::nullopt;
    }

    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::pair<std::string, std::optional<std::int64_t>>, Rational> entries_;
};

/// Chains use their closed form; other trees consult `table` if given.
inline BaseProvider make_base_provider(std::shared_ptr<const BaseTable> table = nullptr) {
    return [table](const DualGraph& tree, const CurveClass& gamma, std::int64_t n,
                   GeometryKind kind) -> std::optional<Rational> {
        const auto order = chain_order(tree);
        if (!order.empty()) {
            std::vector<int> a;
            for (auto v : order) a.push_back(gamma[v]);
            return base_chain(n, a, kind);
        }
        if (table) return table->find(tree, gamma, n);
        return std::nullopt;
    };
}

// ---------------------------------------------------------------------------
// Reduction certificate.

struct ReductionNode {
    std::size_t id = 0;
    std::string gamma;      // coefficients on the node's support graph
    std::size_t vertices = 0;
    std::size_t edges = 0;
    int d = 0;
    int l = 0;
    int g = 0;
    std::string shape;
    std::string action;     // "base", "descent", "vanish: ..."
    int m = 0;
    std::size_t cut_edge = 0;
    std::size_t lifts_considered = 0;
    std::vector<std::pair<std::size_t, int>> children;  // (node id, multiplicity)
    std::optional<Rational> value;
};

struct ReductionCertificate {
    std::vector<ReductionNode> nodes;
    /// Tree neighborhoods are assumed to be critical loci locally; this is
    /// an input hypothesis, never checked.
    bool assumes_critical_chart = true;
    std::vector<std::string> notes;

    /// Every descent step strictly decreases (-l, g) lexicographically.
    bool lexicographic_decrease() const {
        for (const auto& n : nodes)
            for (const auto& [c, mult] : n.children) {
                const auto& ch = nodes.at(c);
                const bool ok = ch.l > n.l || (ch.l == n.l && ch.g < n.g);
                if (!ok) return false;
            }
        return true;
    }

    /// Longest chain of descent steps below `root`.
    int depth(std::size_t root) const {
        std::map<std::size_t, int> memo;
        auto rec = [&](auto&& self, std::size_t id) -> int {
            if (auto it = memo.find(id); it != memo.end()) return it->second;
            int best = 0;
            for (const auto& [c, mult] : nodes.at(id).children) best = std::max(best, 1 + self(self, c));
            return memo[id] = best;
        };
        return rec(rec, root);
    }

    std::string str() const {
        std::ostringstream os;
        os << "critical-chart assumption: " << (assumes_critical_chart ? "assumed" : "not assumed") << "\n";
        for (const auto& n : nodes) {
            os << "node " << n.id << ": gamma=(" << n.gamma << ") on " << n.vertices << "v/" << n.edges << "e"
               << " d=" << n.d << " l=" << n.l << " g=" << n.g << " " << n.shape << " " << n.action;
            if (n.action == "descent")
                os << " m=" << n.m << " cut=" << n.cut_edge << " lifts=" << n.lifts_considered;
            if (n.value) os << " value=" << *n.value;
            if (!n.children.empty()) {
                os << " ->";
                for (const auto& [c, mult] : n.children) os << " " << c << "x" << mult;
            }
            os << "\n";
        }
        for (const auto& note : notes) os << "note: " << note << "\n";
        return os.str();
    }
};

// ---------------------------------------------------------------------------
// The cyclic-cover reduction.

using LoopSelector = std::function<LoopClass(const DualGraph&)>;

inline LoopClass first_basis_loop(const DualGraph& g) {
    auto loops = cycle_basis(g);
    if (loops.empty()) throw DomainError("graph has no loops");
    return loops.front();
}

struct EvalOptions {
    LoopSelector loop_selector = first_basis_loop;
    /// Sum over deck-orbit representatives weighted by orbit size.
    bool use_deck_orbits = true;
    /// Enumerate every lift (disconnected ones vanish) instead of only the
    /// connected ones.
    bool full_lift_enumeration = false;
    int max_depth = 64;
};

namespace detail {

inline std::string graph_class_key(const DualGraph& g, const CurveClass& c) {
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (const auto& e : g.edges()) es.emplace_back(std::min(e.tail, e.head), std::max(e.tail, e.head));
    std::sort(es.begin(), es.end());
    std::ostringstream os;
    os << g.vertex_count() << "|";
    for (const auto& [a, b] : es) os << a << "-" << b << ";";
    os << "|" << c.str();
    return os.str();
}

}  // namespace detail

/// Computes N_{1, gamma} through repeated cyclic covers down to trees.
///
/// Values are memoized per support graph; the certificate records one node
/// per distinct (support, class) pair.
class Evaluator {
public:
    Evaluator(GeometryKind kind, BaseProvider provider, EvalOptions options = {})
        : kind_(kind), provider_(std::move(provider)), options_(std::move(options)) {}

    GeometryKind kind() const { return kind_; }
    const ReductionCertificate& certificate() const { return cert_; }

    /// N_{1, gamma} on graph g.
    Rational n1(const DualGraph& g, const CurveClass& gamma) { return node_value(n1_node(g, gamma, 0)); }

    /// Certificate node id for N_{1, gamma}.
    std::size_t n1_node(const DualGraph& g, const CurveClass& gamma, int depth) {
        g.check_class(gamma);
        if (gamma.is_zero()) throw DomainError("N_1 of the zero class");
        if (depth > options_.max_depth) throw InternalError("reduction exceeded maximum depth");
        for (auto v : gamma.support())
            if (!g.vertex(v).rational) return vanishing_node(g, gamma, "vanish: non-rational component");
        const auto sub = support_subgraph(g, gamma);
        const auto sg = sub.restrict(gamma);
        if (!sub.graph.is_connected()) return vanishing_node(sub.graph, sg, "vanish: disconnected support");

        const auto key = detail::graph_class_key(sub.graph, sg);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        ReductionNode node;
        node.gamma = sg.str();
        node.vertices = sub.graph.vertex_count();
        node.edges = sub.graph.edge_count();
        node.d = sg.degree();
        node.l = sg.length();
        node.g = genus(sub.graph);
        node.shape = classify(sub.graph, sg).str();

        if (node.g == 0) {
            node.action = "base";
            auto v = provider_(sub.graph, sg, 1, kind_);
            if (!v)
                throw MissingBaseError("no base value for " + node.shape + " tree with gamma = (" + node.gamma +
                                       "); supply it in the base table");
            node.value = *v;
            return store(key, std::move(node));
        }

        node.action = "descent";
        auto base = std::make_shared<const DualGraph>(sub.graph);
        const auto loop = options_.loop_selector(*base);
        node.m = standard_cover_degree(node.d);
        node.cut_edge = loop.cut_edge;
        const auto cover = build_cover(base, loop, node.m);
        const bool connected_only = !options_.full_lift_enumeration;
        const bool orbits = options_.use_deck_orbits && connected_only;
        const auto lifts = enumerate_lifts(cover, sg, connected_only, orbits);
        node.lifts_considered = lifts.size();

        Rational sum;
        std::vector<std::pair<std::size_t, int>> children;
        for (const auto& lift : lifts) {
            const auto child = n1_node(*cover.graph, lift.cls, depth + 1);
            sum += Rational(lift.orbit_size) * node_value(child);
            if (cert_.nodes.at(child).action.rfind("vanish", 0) != 0) children.emplace_back(child, lift.orbit_size);
        }
        node.value = sum / Rational(node.m);
        node.children = std::move(children);
        return store(key, std::move(node));
    }

    /// One explicit application of N_1 = (1/m) sum_{lifts} N_1(lift) on the
    /// whole graph g with the given loop and m.
    Rational descent_once(GraphRef g, const LoopClass& loop, int m, const CurveClass& gamma) {
        const auto cover = build_cover(std::move(g), loop, m);
        Rational sum;
        for (const auto& lift : enumerate_lifts(cover, gamma, false, false))
            sum += n1(*cover.graph, lift.cls);
        return sum / Rational(m);
    }

private:
    Rational node_value(std::size_t id) const { return *cert_.nodes.at(id).value; }

    std::size_t vanishing_node(const DualGraph& g, const CurveClass& c, const std::string& why) {
        const auto key = "vanish|" + why;
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        ReductionNode node;
        node.gamma = "*";
        node.vertices = g.vertex_count();
        node.d = c.degree();
        node.action = why;
        node.value = Rational(0);
        return store(key, std::move(node));
    }

    std::size_t store(const std::string& key, ReductionNode node) {
        node.id = cert_.nodes.size();
        cert_.nodes.push_back(std::move(node));
        memo_[key] = cert_.nodes.back().id;
        return cert_.nodes.back().id;
    }

    GeometryKind kind_;
    BaseProvider provider_;
    EvalOptions options_;
    ReductionCertificate cert_;
    std::map<std::string, std::size_t> memo_;
};

/// formula2 applied at the top level with the standard loop and m.
inline Rational descent_N1(const DualGraph& g, const CurveClass& gamma, GeometryKind kind, BaseProvider provider,
                           EvalOptions options = {}) {
    g.check_class(gamma);
    if (gamma.is_zero()) throw DomainError("descent of the zero class");
    if (vanishing_rules(g, gamma, 1).kind == VanishingDecision::Kind::Zero) return Rational(0);
    const auto sub = support_subgraph(g, gamma);
    if (genus(sub.graph) < 1) throw DomainError("descent needs a support of positive genus");
    Evaluator ev(kind, std::move(provider), options);
    auto base = std::make_shared<const DualGraph>(sub.graph);
    const auto loop = options.loop_selector(*base);
    const auto sg = sub.restrict(gamma);
    return ev.descent_once(base, loop, standard_cover_degree(sg.degree()), sg);
}

struct EvalResult {
    Rational value;
    std::string note;  // empty, or why the value is a structural zero
    ReductionCertificate certificate;
    std::size_t root = 0;
};

/// N_{n, gamma} (or its Euler-characteristic version).
///
/// Behrend weight: the multiple cover formula over N_1 values produced by
/// the reduction.  Euler weight on surface-type geometry uses the same
/// pipeline; on super-rigid geometry only the single (-1,-1)-curve is
/// supported.
inline EvalResult reduce_and_compute(const DualGraph& g, const CurveClass& gamma, std::int64_t n, GeometryKind kind,
                                     WeightKind weight, BaseProvider provider, EvalOptions options = {}) {
    g.check_class(gamma);
    if (gamma.is_zero()) throw DomainError("invariant of the zero class");
    EvalResult res;
    const auto vr = vanishing_rules(g, gamma, n);
    if (vr.kind == VanishingDecision::Kind::Zero) {
        res.value = Rational(0);
        res.note = vr.reason;
        ReductionNode node;
        node.gamma = gamma.str();
        node.d = gamma.degree();
        node.l = gamma.length();
        node.action = "vanish: " + vr.reason;
        node.value = Rational(0);
        res.certificate.nodes.push_back(node);
        return res;
    }

    if (weight == WeightKind::Euler && kind == GeometryKind::SuperRigid) {
        const auto sub = support_subgraph(g, gamma);
        if (sub.graph.vertex_count() != 1 || sub.graph.edge_count() != 0)
            throw UnsupportedError("Euler invariants on super-rigid geometry are only available for a single "
                                   "(-1,-1)-curve");
        res.value = euler_variant_rigid_m1m1(n, gamma.degree());
        res.certificate.notes.push_back("Euler weight on a (-1,-1)-curve: closed form, multiple cover formula "
                                        "does not apply");
        return res;
    }

    Evaluator ev(kind, std::move(provider), std::move(options));
    std::optional<std::size_t> root;
    Rational total;
    for (int k : class_arith(gamma, n).divisors) {
        const auto id = ev.n1_node(g, gamma.divided_by(k), 0);
        if (!root) root = id;
        total += inverse_square(k) * *ev.certificate().nodes.at(id).value;
    }
    res.value = total;
    res.certificate = ev.certificate();
    res.root = *root;
    if (vr.kind == VanishingDecision::Kind::DelegateToN1) res.certificate.notes.push_back("primitive class: N_n = N_1");
    if (weight == WeightKind::Euler) res.certificate.notes.push_back("Euler weight: same reduction, surface type");
    return res;
}

/// N_{1, gamma} for every class of degree <= max_degree on g.
inline GvTable build_gv_table(GraphRef g, GeometryKind kind, BaseProvider provider, int max_degree,
                              EvalOptions options = {}) {
    GvTable t(g, max_degree);
    Evaluator ev(kind, std::move(provider), std::move(options));
    for (const auto& c : classes_up_to_degree(g->vertex_count(), max_degree)) {
        if (vanishing_rules(*g, c, 1).kind == VanishingDecision::Kind::Zero) continue;
        const auto sub = support_subgraph(*g, c);
        const auto prov = genus(sub.graph) == 0 ? Provenance::ClosedForm : Provenance::Descent;
        t.set(c, ev.n1(*g, c), prov);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Termination trace without base values.

struct TraceReport {
    bool lexicographic_decrease = true;
    bool reaches_trees = true;
    int max_steps = 0;
    int step_bound = 0;  // d(gamma) + g(supp gamma)
    std::size_t nodes = 0;
    std::vector<std::string> violations;

    bool ok() const { return lexicographic_decrease && reaches_trees && max_steps <= step_bound; }
};

/// Walks every reduction path from (g, gamma) through connected lifts down
/// to trees, checking the (-l, g) decrease at each step.  When
/// `require_h_meeting` is set only lifts meeting the lifted divisor are followed.
inline TraceReport trace_reduction(const DualGraph& g, const CurveClass& gamma, bool require_h_meeting = false,
                                   const LoopSelector& selector = first_basis_loop) {
    g.check_class(gamma);
    TraceReport rep;
    if (gamma.is_zero() || !detail::support_connected(g, gamma)) return rep;
    std::map<std::string, int> memo;
    auto rec = [&](auto&& self, const DualGraph& graph, const CurveClass& c, int depth) -> int {
        if (depth > 64) throw InternalError("reduction trace exceeded maximum depth");
        const auto sub = support_subgraph(graph, c);
        const auto sc = sub.restrict(c);
        const auto key = detail::graph_class_key(sub.graph, sc);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const int gen = genus(sub.graph);
        int steps = 0;
        if (gen > 0) {
            auto base = std::make_shared<const DualGraph>(sub.graph);
            const int m = standard_cover_degree(sc.degree());
            const auto cover = build_cover(base, selector(*base), m);
            bool any = false;
            for (const auto& lift : enumerate_lifts(cover, sc, true, true)) {
                if (require_h_meeting && lift_h_pairing(cover, lift.cls) == 0) continue;
                any = true;
                const auto child_sub = support_subgraph(*cover.graph, lift.cls);
                const int cl = lift.cls.length();
                const int cg = genus(child_sub.graph);
                if (!(cl > sc.length() || (cl == sc.length() && cg < gen))) {
                    rep.lexicographic_decrease = false;
                    rep.violations.push_back("(" + sc.str() + ") -> (" + child_sub.restrict(lift.cls).str() + ")");
                }
                steps = std::max(steps, 1 + self(self, *cover.graph, lift.cls, depth + 1));
            }
            if (!any && !require_h_meeting) rep.reaches_trees = false;
        }
        memo[key] = steps;
        return steps;
    };
    rep.max_steps = rec(rec, g, gamma, 0);
    rep.step_bound = gamma.degree() + genus(support_subgraph(g, gamma).graph);
    rep.nodes = memo.size();
    return rep;
}

}  // namespace dtcover
