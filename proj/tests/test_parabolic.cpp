#include <gtest/gtest.h>

#include <random>

#include "dtcover/parabolic.hpp"

using namespace dtcover;

namespace {

constexpr GeometryKind kRigid = GeometryKind::SuperRigid;
constexpr GeometryKind kSurface = GeometryKind::SurfaceType;

Rational binom_oracle(std::int64_t e, int k) {
    Rational r(1);
    for (int i = 0; i < k; ++i) r = r * Rational(e - i) / Rational(i + 1);
    return r;
}

GraphRef ref(DualGraph g) { return std::make_shared<const DualGraph>(std::move(g)); }

GvLookup zero_lookup() {
    return [](const CurveClass&) { return Rational(0); };
}

// Evaluator-backed lookup kept alive by the returned closure.
GvLookup engine_lookup(const GraphRef& g, GeometryKind kind) {
    auto ev = std::make_shared<Evaluator>(kind, make_base_provider());
    return [ev, g](const CurveClass& c) { return ev->n1(*g, c); };
}

}  // namespace

TEST(DtPar, ZeroGvGivesZeroTable) {
    auto g = ref(make_cycle(2));
    const auto t = dt_par_from_gv(zero_lookup(), g, Rational(0), 4);
    EXPECT_TRUE(t.entries.empty());
    EXPECT_TRUE(t.integral);
}

TEST(DtPar, SingleRigidCurveBinomialOracle) {
    for (int h = 1; h <= 3; ++h) {
        auto g = ref(make_chain(1, h));
        GvTable gv(g, 4);
        gv.set(CurveClass{1}, Rational(1), Provenance::ClosedForm);
        const auto t = dt_par_from_gv(gv, Rational(1), 4);
        // (1 - (-1)^h q t)^h
        for (int k = 1; k <= 4; ++k) {
            const Rational sign = (h % 2 == 1) ? Rational(1) : Rational(k % 2 ? -1 : 1);
            EXPECT_EQ(t.at(k, CurveClass{k}), sign * binom_oracle(h, k)) << "h=" << h << " k=" << k;
        }
        EXPECT_TRUE(t.integral);
        EXPECT_EQ(t.h_context, (std::vector<int>{h}));
        EXPECT_THROW(t.at(5, CurveClass{5}), MissingDataError);
    }
}

TEST(DtPar, ProductSkipsFactorsWithoutH) {
    auto g = ref(DualGraph({{"A", 1, 0, true}, {"B", 1, 1, true}}, {{0, 1}}));
    const GvLookup n1 = [](const CurveClass&) -> Rational { throw MissingDataError("must not be queried"); };
    const auto s = gv_product_side(n1, g, {TermIndex{0, CurveClass{1, 0}}}, 3, 3);
    EXPECT_EQ(s, FormalSeries::one(g, 3, 3));
}

TEST(DtHat, MinimalClassIsItself) {
    auto g = ref(make_cycle(1));
    const auto n1 = engine_lookup(g, kRigid);
    const auto t = dt_par_from_gv(n1, g, Rational(0), 4);
    EXPECT_EQ(dt_hat(t, 0, CurveClass{1}, Rational(0)), t.at(0, CurveClass{1}));
}

TEST(DtHat, MatchesSeriesLog) {
    for (const auto& base : {make_cycle(1), make_cycle(2)})
        for (auto kind : {kRigid, kSurface})
            for (const auto& slope : {Rational(0), Rational(1), Rational(1, 2), Rational(-1, 3)}) {
                auto g = ref(base);
                const auto n1 = engine_lookup(g, kind);
                const int D = 4;
                const auto nb = family_n_bound(*g, slope, D);
                const auto product = gv_product_side(n1, g, slope, D, nb);
                const auto t = dtpar_from_series(product, slope);
                const auto log = series_log(product);
                for (const auto& idx : slope_family(*g, slope, D))
                    EXPECT_EQ(dt_hat(t, idx.n, idx.gamma, slope), log.coefficient(idx))
                        << "(" << idx.gamma.str() << ") n=" << idx.n;
            }
}

TEST(DtHat, InvertsExpOnRandomFamilies) {
    std::mt19937 rng(9);
    auto g = ref(make_chain(2));
    const Rational slope(1, 2);
    const auto family = slope_family(*g, slope, 5);
    for (int rep = 0; rep < 20; ++rep) {
        FormalSeries s(g, 5, family_n_bound(*g, slope, 5));
        for (const auto& idx : family)
            if (rng() % 3 == 0) s.add_term(idx, Rational(static_cast<int>(rng() % 7) - 3, 1 + rng() % 3));
        const auto t = dtpar_from_series(series_exp(s), slope);
        for (const auto& idx : family) EXPECT_EQ(dt_hat(t, idx.n, idx.gamma, slope), s.coefficient(idx));
    }
}

TEST(DtHat, Errors) {
    auto g = ref(make_cycle(1));
    const auto t = dt_par_from_gv(zero_lookup(), g, Rational(0), 2);
    EXPECT_THROW(dt_hat(t, 1, CurveClass{1}, Rational(0)), DomainError);
    EXPECT_THROW(dt_hat(t, 0, CurveClass{3}, Rational(0)), MissingDataError);
    EXPECT_THROW(dt_hat(t, 0, CurveClass{0}, Rational(0)), DomainError);
}

TEST(LogForm, HoldsOnEngineTables) {
    for (int N = 1; N <= 3; ++N)
        for (auto kind : {kRigid, kSurface}) {
            auto g = ref(make_cycle(N));
            const auto n1 = engine_lookup(g, kind);
            const int D = N == 3 ? 3 : 4;
            std::map<Rational, DtParTable> tables;
            for (const auto& c : classes_up_to_degree(g->vertex_count(), D))
                for (std::int64_t n = -3; n <= 3; ++n) {
                    const auto slope = slope_of(*g, n, c);
                    auto it = tables.find(slope);
                    if (it == tables.end()) it = tables.emplace(slope, dt_par_from_gv(n1, g, slope, D)).first;
                    EXPECT_TRUE(it->second.integral);
                    const auto r = check_log_form(*g, c, n, n1, it->second);
                    EXPECT_TRUE(r.verdict) << "I_" << N << " (" << c.str() << ") n=" << n << " " << r.lhs << " vs "
                                           << r.rhs;
                }
        }
}

TEST(LogForm, ZeroAndPerturbedTables) {
    auto g = ref(make_cycle(1));
    const auto zero = dt_par_from_gv(zero_lookup(), g, Rational(0), 3);
    const auto r0 = check_log_form(*g, CurveClass{2}, 0, zero_lookup(), zero);
    EXPECT_TRUE(r0.verdict);
    EXPECT_EQ(r0.lhs, "0");
    EXPECT_EQ(r0.rhs, "0");

    const auto n1 = engine_lookup(g, kRigid);
    const GvLookup wrong = [n1](const CurveClass& c) { return c == CurveClass{2} ? n1(c) + Rational(1) : n1(c); };
    const auto t = dt_par_from_gv(n1, g, Rational(0), 3);
    EXPECT_FALSE(check_log_form(*g, CurveClass{2}, 0, wrong, t).verdict);
    const auto r = check_log_form(*g, CurveClass{2}, 0, n1, t);
    EXPECT_TRUE(r.verdict);
    EXPECT_EQ(r.to_json()["verdict"], "PASS");
    EXPECT_EQ(r.to_json()["identity"], "log-form");
}

TEST(DescentDtPar, WorkedCases) {
    auto i1 = ref(make_cycle(1));
    const auto r = descent_dtpar_check(i1, CurveClass{2}, 0, kRigid, make_base_provider());
    EXPECT_TRUE(r.verdict);
    EXPECT_EQ(r.lhs, "-2");
    auto i2 = ref(make_cycle(2));
    for (std::int64_t n = -3; n <= 3; ++n)
        EXPECT_TRUE(descent_dtpar_check(i2, CurveClass{1, 1}, n, kSurface, make_base_provider()).verdict) << n;
}

TEST(DescentDtPar, SheetChoiceLeavesVerdictUnchanged) {
    auto g = ref(make_cycle(2));
    for (const auto& c : classes_up_to_degree(2, 3))
        for (int sheet = 0; sheet < 3; ++sheet) {
            const auto r = descent_dtpar_check(g, c, 0, kRigid, make_base_provider(), sheet);
            EXPECT_TRUE(r.verdict) << c.str() << " sheet " << sheet;
        }
}

TEST(DescentDtPar, RequiresHOnSupport) {
    auto g = ref(DualGraph({{"A", 1, 0, true}}, {{0, 0}}));
    EXPECT_THROW(descent_dtpar_check(g, CurveClass{1}, 0, kRigid, make_base_provider()), ConfigError);
    EXPECT_THROW(telescoping_check(g, CurveClass{1}, 0, kRigid, make_base_provider()), ConfigError);
}

TEST(DescentN1, Cases) {
    for (const auto& base : {make_cycle(1), make_cycle(3)}) {
        auto g = ref(base);
        for (const auto& c : classes_up_to_degree(g->vertex_count(), 3))
            EXPECT_TRUE(descent_n1_check(g, c, kRigid, make_base_provider()).verdict) << c.str();
    }
}

TEST(Telescoping, AllStagesAgree) {
    auto i1 = ref(make_cycle(1));
    const auto t1 = telescoping_check(i1, CurveClass{2}, 0, kRigid, make_base_provider());
    EXPECT_TRUE(t1.verdict);
    EXPECT_EQ(t1.stages.size(), 9u);
    EXPECT_EQ(t1.stages.front().second, Rational(-5, 2));
    auto i3 = ref(make_cycle(3));
    const auto t3 = telescoping_check(i3, CurveClass{1, 1, 1}, 0, kSurface, make_base_provider());
    EXPECT_TRUE(t3.verdict);
    for (const auto& [name, v] : t3.stages) EXPECT_EQ(v, t3.stages.front().second) << name;
    // Primitive class: only k = 1 appears.
    const auto tp = telescoping_check(i1, CurveClass{3}, 1, kRigid, make_base_provider());
    EXPECT_TRUE(tp.verdict);
    EXPECT_EQ(tp.to_report().to_json()["certificate"]["stages"].size(), 9u);
}
