#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dtcover/curve_class.hpp"
#include "dtcover/cyclic_cover.hpp"
#include "dtcover/dual_graph.hpp"
#include "dtcover/errors.hpp"
#include "dtcover/formal_series.hpp"
#include "dtcover/invariants.hpp"
#include "dtcover/rational.hpp"

namespace dtcover {

/// n with n / (omega . gamma) = slope, if it is an integer.
inline std::optional<std::int64_t> slope_exponent(const DualGraph& g, const CurveClass& gamma, const Rational& slope) {
    const Rational n = slope * Rational(g.omega_pairing(gamma));
    if (!n.is_integer()) return std::nullopt;
    return n.numerator().get_si();
}

inline Rational slope_of(const DualGraph& g, std::int64_t n, const CurveClass& gamma) {
    return Rational(n) / Rational(g.omega_pairing(gamma));
}

/// One factor (1 - (-1)^{gamma.H} q^n t^gamma)^{(gamma.H) N_{1,gamma}}.
inline FormalSeries gv_factor(const GraphRef& g, const TermIndex& idx, const Rational& n1, int truncation,
                              std::int64_t n_bound) {
    const auto h = g->h_pairing(idx.gamma);
    auto base = FormalSeries::one(g, truncation, n_bound);
    base.add_term(idx, Rational(h % 2 == 0 ? -1 : 1));
    return series_pow(base, Rational(h) * n1);
}

/// Product side over an explicit finite set of (n, gamma) indices.
inline FormalSeries gv_product_side(const GvLookup& n1, const GraphRef& g, const std::vector<TermIndex>& support,
                                    int truncation, std::int64_t n_bound) {
    auto out = FormalSeries::one(g, truncation, n_bound);
    for (const auto& idx : support) {
        if (idx.gamma.is_zero()) throw DomainError("product factor with gamma = 0");
        if (g->h_pairing(idx.gamma) == 0) continue;  // exponent (gamma.H) N vanishes
        if (!out.in_window(idx)) continue;
        const Rational value = n1(idx.gamma);
        if (value.is_zero()) continue;
        out = series_mul(out, gv_factor(g, idx, value, truncation, n_bound));
    }
    return out;
}

/// Every (n, gamma) with d(gamma) <= D in the slope-mu family.
inline std::vector<TermIndex> slope_family(const DualGraph& g, const Rational& slope, int truncation) {
    std::vector<TermIndex> out;
    for (const auto& c : classes_up_to_degree(g.vertex_count(), truncation))
        if (auto n = slope_exponent(g, c, slope)) out.push_back({*n, c});
    return out;
}

/// Product side for the slope-mu family.
inline FormalSeries gv_product_side(const GvLookup& n1, const GraphRef& g, const Rational& slope, int truncation,
                                    std::int64_t n_bound) {
    return gv_product_side(n1, g, slope_family(*g, slope, truncation), truncation, n_bound);
}

inline FormalSeries gv_product_side(const GvTable& table, const Rational& slope, int truncation,
                                    std::int64_t n_bound) {
    return gv_product_side(table.as_lookup(), table.graph(), slope, truncation, n_bound);
}

// ---------------------------------------------------------------------------

/// DT^par_{n, gamma} for one slope family, read off the product side.
struct DtParTable {
    GraphRef graph;
    Rational slope;
    int truncation = 0;
    std::map<TermIndex, Rational> entries;
    std::vector<int> h_context;
    bool integral = true;

    Rational at(std::int64_t n, const CurveClass& gamma) const {
        if (gamma.degree() > truncation)
            throw MissingDataError("DT^par table truncated below degree " + std::to_string(gamma.degree()));
        auto it = entries.find({n, gamma});
        return it == entries.end() ? Rational(0) : it->second;
    }
};

inline std::int64_t family_n_bound(const DualGraph& g, const Rational& slope, int truncation) {
    int max_omega = 1;
    for (const auto& v : g.vertices()) max_omega = std::max(max_omega, v.omega_deg);
    const Rational b = slope * Rational(std::int64_t{max_omega} * truncation);
    const auto ab = b.sign() < 0 ? -b : b;
    return BigInt(ab.numerator() / ab.denominator()).get_si() + 1;
}

inline DtParTable dtpar_from_series(const FormalSeries& product, const Rational& slope) {
    DtParTable t;
    t.graph = product.context();
    t.slope = slope;
    t.truncation = product.truncation();
    for (const auto& v : t.graph->vertices()) t.h_context.push_back(v.h_deg);
    for (const auto& [k, v] : product.terms()) {
        if (k.gamma.is_zero()) continue;
        t.entries[k] = v;
        if (!v.is_integer()) t.integral = false;
    }
    return t;
}

inline DtParTable dt_par_from_gv(const GvLookup& n1, const GraphRef& g, const Rational& slope, int truncation) {
    const auto nb = family_n_bound(*g, slope, truncation);
    return dtpar_from_series(gv_product_side(n1, g, slope, truncation, nb), slope);
}

inline DtParTable dt_par_from_gv(const GvTable& table, const Rational& slope, int truncation) {
    return dt_par_from_gv(table.as_lookup(), table.graph(), slope, truncation);
}

/// Hat-transform by the explicit splitting sum
///   sum_l (-1)^{l-1}/l sum_{gamma_1+..+gamma_l = gamma, slopes equal} prod DT^par.
inline Rational dt_hat(const DtParTable& table, std::int64_t n, const CurveClass& gamma, const Rational& slope) {
    const auto& g = *table.graph;
    g.check_class(gamma);
    if (gamma.is_zero()) throw DomainError("dt_hat of the zero class");
    if (slope_of(g, n, gamma) != slope) throw DomainError("(n, gamma) does not lie on the requested slope");
    if (gamma.degree() > table.truncation) throw MissingDataError("DT^par table does not reach gamma");

    auto box = classes_below(gamma);  // lexicographic, starts at 0
    std::map<CurveClass, std::size_t> pos;
    for (std::size_t i = 0; i < box.size(); ++i) pos[box[i]] = i;
    std::vector<Rational> single(box.size());
    for (std::size_t i = 1; i < box.size(); ++i)
        if (auto ni = slope_exponent(g, box[i], slope)) single[i] = table.at(*ni, box[i]);

    // layer[i] = sum over ordered l-splittings of box[i].
    std::vector<Rational> layer = single;
    Rational result = layer[pos[gamma]];
    const int d = gamma.degree();
    for (int l = 2; l <= d; ++l) {
        std::vector<Rational> next(box.size());
        for (std::size_t i = 1; i < box.size(); ++i) {
            for (std::size_t j = 1; j < box.size(); ++j) {
                if (single[j].is_zero() || !box[j].fits_in(box[i]) || box[j] == box[i]) continue;
                const auto rest = pos[box[i] - box[j]];
                if (!layer[rest].is_zero()) next[i] += single[j] * layer[rest];
            }
        }
        layer = std::move(next);
        result += Rational(l % 2 == 1 ? 1 : -1, l) * layer[pos[gamma]];
    }
    return result;
}

// ---------------------------------------------------------------------------
// Reports.

struct Report {
    std::string identity;
    std::string lhs;
    std::string rhs;
    bool verdict = false;
    nlohmann::json certificate = nlohmann::json::object();

    nlohmann::json to_json() const {
        return {{"identity", identity}, {"lhs", lhs}, {"rhs", rhs}, {"verdict", verdict ? "PASS" : "FAIL"},
                {"certificate", certificate}};
    }
};

inline void require_h_on_support(const DualGraph& g, const CurveClass& gamma) {
    for (auto v : gamma.support())
        if (g.vertex(v).h_deg < 1)
            throw ConfigError("parabolic data needs H . C >= 1 on every support component ('" + g.vertex(v).name +
                              "' has 0)");
}

/// sum_{k | (n, gamma)} (-1)^{gamma.H - 1}/k^2 (gamma.H) N_{1, gamma/k}.
inline Rational log_form_rhs(const DualGraph& g, const CurveClass& gamma, std::int64_t n, const GvLookup& n1) {
    const auto h = g.h_pairing(gamma);
    return Rational(sign_power(h - 1) * h) * multiple_cover_eval(n, gamma, n1);
}

inline Report check_log_form(const DualGraph& g, const CurveClass& gamma, std::int64_t n, const GvLookup& n1,
                             const DtParTable& dtpar) {
    Report r;
    r.identity = "log-form";
    const Rational slope = slope_of(g, n, gamma);
    const Rational lhs = dt_hat(dtpar, n, gamma, slope);
    const Rational rhs = log_form_rhs(g, gamma, n, n1);
    r.lhs = lhs.str();
    r.rhs = rhs.str();
    r.verdict = lhs == rhs;
    r.certificate = {{"gamma", gamma.str()}, {"n", n}, {"slope", slope.str()}, {"dtpar_integral", dtpar.integral}};
    return r;
}

inline Report check_log_form(const DualGraph& g, const CurveClass& gamma, std::int64_t n, const GvTable& gv,
                             const DtParTable& dtpar) {
    return check_log_form(g, gamma, n, gv.as_lookup(), dtpar);
}

// ---------------------------------------------------------------------------
// Cover-side machinery shared by the descent and telescoping checks.

namespace detail {

/// First basis loop touching supp(gamma).
inline LoopClass loop_meeting(const DualGraph& g, const CurveClass& gamma) {
    const auto supp = gamma.support();
    for (const auto& loop : cycle_basis(g)) {
        for (auto v : loop.vertices(g))
            if (std::binary_search(supp.begin(), supp.end(), v)) return loop;
    }
    throw DomainError("no basis loop meets the support of (" + gamma.str() + ")");
}

/// Cover classes whose pushforward is <= gamma, in the slope family.
inline std::vector<TermIndex> cover_family_below(const CoverGraph& c, const CurveClass& gamma, const Rational& slope) {
    std::vector<TermIndex> out;
    const auto nb = c.base->vertex_count();
    std::vector<std::vector<std::vector<int>>> per_vertex(nb);
    for (std::size_t v = 0; v < nb; ++v)
        for (int j = 0; j <= gamma[v]; ++j)
            for (auto& comp : compositions(j, c.m, false)) per_vertex[v].push_back(std::move(comp));
    CurveClass cur = c.graph->zero_class();
    auto rec = [&](auto&& self, std::size_t v) -> void {
        if (v == nb) {
            if (cur.is_zero()) return;
            if (auto n = slope_exponent(*c.graph, cur, slope)) out.push_back({*n, cur});
            return;
        }
        for (const auto& comp : per_vertex[v]) {
            for (int i = 0; i < c.m; ++i) cur.at(c.vertex(v, i)) = comp[static_cast<std::size_t>(i)];
            self(self, v + 1);
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

struct CoverContext {
    CoverGraph cover;
    Rational slope;
    DtParTable base_dtpar;
    DtParTable cover_dtpar;
};

inline CoverContext make_cover_context(const GraphRef& g, const CurveClass& gamma, const Rational& slope,
                                       Evaluator& ev, int h_sheet) {
    const int d = gamma.degree();
    const auto loop = loop_meeting(*g, gamma);
    auto cover = build_cover(g, loop, standard_cover_degree(d), h_sheet);
    const GvLookup base_n1 = [&](const CurveClass& c) { return ev.n1(*g, c); };
    const GvLookup cover_n1 = [&](const CurveClass& c) { return ev.n1(*cover.graph, c); };

    std::vector<TermIndex> base_family;
    for (const auto& c : classes_below(gamma))
        if (!c.is_zero())
            if (auto n = slope_exponent(*g, c, slope)) base_family.push_back({*n, c});
    const auto nb = family_n_bound(*g, slope, d);
    auto base_dtpar = dtpar_from_series(gv_product_side(base_n1, g, base_family, d, nb), slope);
    auto cover_dtpar =
        dtpar_from_series(gv_product_side(cover_n1, cover.graph, cover_family_below(cover, gamma, slope), d, nb),
                          slope);
    return {std::move(cover), slope, std::move(base_dtpar), std::move(cover_dtpar)};
}

inline int lift_sign(const DualGraph& base, const CoverGraph& c, const CurveClass& gamma, const CurveClass& lifted) {
    return sign_power(base.h_pairing(gamma) - lift_h_pairing(c, lifted));
}

}  // namespace detail

/// DT^par_{n,gamma} = sum_{lifts} (-1)^{gamma.H - lift.H~} DT^par_{n,lift}(cover).
inline Report descent_dtpar_check(const GraphRef& g, const CurveClass& gamma, std::int64_t n, GeometryKind kind,
                                  const BaseProvider& provider, int h_sheet = 0, EvalOptions options = {}) {
    g->check_class(gamma);
    if (gamma.is_zero()) throw DomainError("descent check of the zero class");
    require_h_on_support(*g, gamma);
    Evaluator ev(kind, provider, std::move(options));
    const Rational slope = slope_of(*g, n, gamma);
    const auto ctx = detail::make_cover_context(g, gamma, slope, ev, h_sheet);
    const Rational lhs = ctx.base_dtpar.at(n, gamma);
    Rational rhs;
    std::size_t lifts = 0;
    for (const auto& lift : enumerate_lifts(ctx.cover, gamma, false, false)) {
        ++lifts;
        rhs += Rational(detail::lift_sign(*g, ctx.cover, gamma, lift.cls)) * ctx.cover_dtpar.at(n, lift.cls);
    }
    Report r;
    r.identity = "descent-dtpar";
    r.lhs = lhs.str();
    r.rhs = rhs.str();
    r.verdict = lhs == rhs && ctx.base_dtpar.integral && ctx.cover_dtpar.integral;
    r.certificate = {{"gamma", gamma.str()},
                     {"n", n},
                     {"m", ctx.cover.m},
                     {"cut_edge", ctx.cover.loop.cut_edge},
                     {"h_sheet", ctx.cover.h_sheet},
                     {"lifts", lifts},
                     {"integral", ctx.base_dtpar.integral && ctx.cover_dtpar.integral}};
    return r;
}

/// N_{1,gamma} = (1/m) sum over all lifts, comparing the reduction's value
/// against an explicit one-level sum with a different lift enumeration.
inline Report descent_n1_check(const GraphRef& g, const CurveClass& gamma, GeometryKind kind,
                               const BaseProvider& provider) {
    g->check_class(gamma);
    Report r;
    r.identity = "descent-n1";
    Evaluator ev(kind, provider);
    const Rational lhs = ev.n1(*g, gamma);
    Rational rhs = lhs;
    nlohmann::json cert = {{"gamma", gamma.str()}};
    if (vanishing_rules(*g, gamma, 1).kind != VanishingDecision::Kind::Zero) {
        const auto sub = support_subgraph(*g, gamma);
        if (genus(sub.graph) > 0) {
            EvalOptions full;
            full.use_deck_orbits = false;
            full.full_lift_enumeration = true;
            Evaluator ev_full(kind, provider, full);
            auto base = std::make_shared<const DualGraph>(*g);
            const auto loop = detail::loop_meeting(*g, gamma);
            const int m = standard_cover_degree(gamma.degree());
            rhs = ev_full.descent_once(base, loop, m, gamma);
            cert["m"] = m;
            cert["cut_edge"] = loop.cut_edge;
        } else {
            cert["base"] = classify(*g, gamma).str();
        }
    }
    r.lhs = lhs.str();
    r.rhs = rhs.str();
    r.verdict = lhs == rhs;
    r.certificate = cert;
    return r;
}

/// Every intermediate expression of the telescoping computation that turns
/// the cover-side hat formula into the base-side one.
struct TelescopingReport {
    std::vector<std::pair<std::string, Rational>> stages;
    bool verdict = false;
    int m = 0;

    Report to_report() const {
        Report r;
        r.identity = "telescoping";
        r.lhs = stages.front().second.str();
        r.rhs = stages.back().second.str();
        r.verdict = verdict;
        nlohmann::json st = nlohmann::json::array();
        for (const auto& [name, v] : stages) st.push_back({{"stage", name}, {"value", v.str()}});
        r.certificate = {{"m", m}, {"stages", st}};
        return r;
    }
};

inline TelescopingReport telescoping_check(const GraphRef& g, const CurveClass& gamma, std::int64_t n,
                                           GeometryKind kind, const BaseProvider& provider, int h_sheet = 0) {
    g->check_class(gamma);
    if (gamma.is_zero()) throw DomainError("telescoping check of the zero class");
    require_h_on_support(*g, gamma);
    Evaluator ev(kind, provider);
    const Rational slope = slope_of(*g, n, gamma);
    const auto ctx = detail::make_cover_context(g, gamma, slope, ev, h_sheet);
    const auto& cover = ctx.cover;
    const auto& cg = *cover.graph;
    const int m = cover.m;
    const auto gh = g->h_pairing(gamma);
    const int outer_sign = sign_power(gh - 1);
    auto n1_cover = [&](const CurveClass& c) { return ev.n1(cg, c); };

    TelescopingReport rep;
    rep.m = m;
    // Hat transform on the base.
    rep.stages.emplace_back("hat(DT^par) on base", dt_hat(ctx.base_dtpar, n, gamma, slope));

    // Substitute the descent of every DT^par_{n_i, gamma_i}.
    DtParTable descended = ctx.base_dtpar;
    descended.entries.clear();
    for (const auto& c : classes_below(gamma)) {
        if (c.is_zero()) continue;
        auto nc = slope_exponent(*g, c, slope);
        if (!nc) continue;
        Rational s;
        for (const auto& lift : enumerate_lifts(cover, c, false, false))
            s += Rational(detail::lift_sign(*g, cover, c, lift.cls)) * ctx.cover_dtpar.at(*nc, lift.cls);
        if (!s.is_zero()) descended.entries[{*nc, c}] = s;
    }
    rep.stages.emplace_back("splitting sum of descended DT^par", dt_hat(descended, n, gamma, slope));

    const auto lifts = enumerate_lifts(cover, gamma, false, false);
    Rational regrouped;
    for (const auto& lift : lifts)
        regrouped += Rational(detail::lift_sign(*g, cover, gamma, lift.cls)) * dt_hat(ctx.cover_dtpar, n, lift.cls, slope);
    rep.stages.emplace_back("sum over lifts of signed cover hat", regrouped);

    Rational per_lift;
    for (const auto& lift : lifts) {
        const auto lh = lift_h_pairing(cover, lift.cls);
        if (lh == 0) continue;
        for (int k : class_arith(lift.cls, n).divisors)
            per_lift += Rational(outer_sign * lh) * inverse_square(k) * n1_cover(lift.cls.divided_by(k));
    }
    rep.stages.emplace_back("cover hat formula per lift", per_lift);

    const auto base_divs = class_arith(gamma, n).divisors;
    Rational by_k;
    for (int k : base_divs)
        for (const auto& lift : lifts) {
            if (!lift.cls.divisible_by(k)) continue;
            const auto lh = lift_h_pairing(cover, lift.cls);
            if (lh) by_k += Rational(outer_sign * lh) * inverse_square(k) * n1_cover(lift.cls.divided_by(k));
        }
    rep.stages.emplace_back("regrouped by k | (n, gamma)", by_k);

    Rational deck_avg;
    for (int k : base_divs) {
        Rational inner;
        for (const auto& lift : lifts) {
            if (!lift.cls.divisible_by(k)) continue;
            for (int t = 0; t < m; ++t) {
                const auto moved = cover.deck(lift.cls, t);
                const auto lh = lift_h_pairing(cover, moved);
                if (lh) inner += Rational(lh) * n1_cover(moved.divided_by(k));
            }
        }
        deck_avg += Rational(outer_sign) * inverse_square(k) * inner / Rational(m);
    }
    rep.stages.emplace_back("deck-averaged", deck_avg);

    Rational collapsed;
    for (int k : base_divs) {
        Rational inner;
        for (const auto& lift : lifts)
            if (lift.cls.divisible_by(k)) inner += n1_cover(lift.cls.divided_by(k));
        collapsed += Rational(outer_sign * gh) * inverse_square(k) * inner / Rational(m);
    }
    rep.stages.emplace_back("deck orbit sum collapsed to gamma.H", collapsed);

    Rational descended_n1;
    for (int k : base_divs) {
        const auto part = gamma.divided_by(k);
        Rational s;
        for (const auto& lift : enumerate_lifts(cover, part, false, false)) s += n1_cover(lift.cls);
        descended_n1 += Rational(outer_sign * gh) * inverse_square(k) * s / Rational(m);
    }
    rep.stages.emplace_back("N_1 descended on gamma/k", descended_n1);

    const GvLookup base_n1 = [&](const CurveClass& c) { return ev.n1(*g, c); };
    rep.stages.emplace_back("log-form right-hand side", log_form_rhs(*g, gamma, n, base_n1));

    rep.verdict = ctx.base_dtpar.integral && ctx.cover_dtpar.integral;
    for (const auto& [name, v] : rep.stages)
        if (v != rep.stages.front().second) rep.verdict = false;
    return rep;
}

}  // namespace dtcover
