#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>

#include "dtcover/curve_class.hpp"
#include "dtcover/dual_graph.hpp"
#include "dtcover/errors.hpp"
#include "dtcover/rational.hpp"

namespace dtcover {

/// Exponent pair (n, gamma) of the monomial q^n t^gamma.
struct TermIndex {
    std::int64_t n = 0;
    CurveClass gamma;

    friend bool operator==(const TermIndex&, const TermIndex&) = default;
    friend std::strong_ordering operator<=>(const TermIndex& a, const TermIndex& b) {
        if (auto c = a.gamma <=> b.gamma; c != 0) return c;
        return a.n <=> b.n;
    }

    TermIndex operator+(const TermIndex& o) const { return {n + o.n, gamma + o.gamma}; }
};

using GraphRef = std::shared_ptr<const DualGraph>;

/// Truncated power series in q^n t^gamma over Q.
///
/// Only terms with d(gamma) <= truncation and |n| <= n_bound are kept; the
/// constant term is the only admissible index with gamma = 0.  Products drop
/// what falls outside the window.  The degree cut is an ideal; the n cut is
/// not, so ring identities are exact only when n_bound covers every |n|
/// reachable within the truncation degree.
class FormalSeries {
public:
    using TermMap = std::map<TermIndex, Rational>;

    FormalSeries(GraphRef context, int truncation, std::int64_t n_bound)
        : ctx_(std::move(context)), truncation_(truncation), n_bound_(n_bound) {
        if (!ctx_) throw ContextError("formal series without a graph context");
        if (truncation_ < 1) throw DomainError("truncation must be positive");
        if (n_bound_ < 0) throw DomainError("n bound must be non-negative");
    }

    static FormalSeries constant(GraphRef ctx, int truncation, std::int64_t n_bound, const Rational& c) {
        FormalSeries s(std::move(ctx), truncation, n_bound);
        s.add_term({0, s.ctx_->zero_class()}, c);
        return s;
    }

    static FormalSeries one(GraphRef ctx, int truncation, std::int64_t n_bound) {
        return constant(std::move(ctx), truncation, n_bound, Rational(1));
    }

    const GraphRef& context() const { return ctx_; }
    int truncation() const { return truncation_; }
    std::int64_t n_bound() const { return n_bound_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool in_window(const TermIndex& idx) const {
        return idx.gamma.degree() <= truncation_ && (idx.n <= n_bound_ && -idx.n <= n_bound_);
    }

    /// Adds c q^n t^gamma; out-of-window indices are dropped.
    void add_term(const TermIndex& idx, const Rational& c) {
        ctx_->check_class(idx.gamma);
        if (idx.gamma.is_zero() && idx.n != 0)
            throw DomainError("q^n with gamma = 0 is only allowed for n = 0");
        if (c.is_zero() || !in_window(idx)) return;
        auto [it, inserted] = terms_.try_emplace(idx, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Rational coefficient(const TermIndex& idx) const {
        auto it = terms_.find(idx);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational constant_term() const { return coefficient({0, ctx_->zero_class()}); }

    void check_compatible(const FormalSeries& o) const {
        const bool same_graph = ctx_ == o.ctx_ || *ctx_ == *o.ctx_;
        if (!same_graph) throw ContextError("formal series over different dual graphs");
        if (truncation_ != o.truncation_ || n_bound_ != o.n_bound_)
            throw ContextError("formal series with different truncation windows");
    }

    FormalSeries& operator+=(const FormalSeries& o) {
        check_compatible(o);
        for (const auto& [k, v] : o.terms_) add_term(k, v);
        return *this;
    }
    FormalSeries& operator-=(const FormalSeries& o) {
        check_compatible(o);
        for (const auto& [k, v] : o.terms_) add_term(k, -v);
        return *this;
    }
    FormalSeries& operator*=(const Rational& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, v] : terms_) v *= c;
        return *this;
    }

    friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
    friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a -= b; }
    friend FormalSeries operator*(FormalSeries a, const Rational& c) { return a *= c; }

    friend bool operator==(const FormalSeries& a, const FormalSeries& b) {
        return a.truncation_ == b.truncation_ && a.n_bound_ == b.n_bound_ && a.terms_ == b.terms_;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, v] : terms_) {
            os << (first ? "" : " + ") << v;
            if (!k.gamma.is_zero()) os << " q^" << k.n << " t^(" << k.gamma.str() << ")";
            first = false;
        }
        return os.str();
    }

private:
    GraphRef ctx_;
    int truncation_;
    std::int64_t n_bound_;
    TermMap terms_;
};

/// Cauchy product in the commutative monoid algebra of (n, gamma).
inline FormalSeries series_mul(const FormalSeries& a, const FormalSeries& b) {
    a.check_compatible(b);
    FormalSeries out(a.context(), a.truncation(), a.n_bound());
    for (const auto& [ka, va] : a.terms()) {
        const int da = ka.gamma.degree();
        for (const auto& [kb, vb] : b.terms()) {
            if (da + kb.gamma.degree() > a.truncation()) continue;
            out.add_term(ka + kb, va * vb);
        }
    }
    return out;
}

inline FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) { return series_mul(a, b); }

namespace detail {

// sum_{l=1}^{D} coeff(l) u^l, with u lacking a constant term so u^{D+1} = 0.
template <class Coeff>
FormalSeries power_sum(const FormalSeries& u, Coeff coeff) {
    FormalSeries out(u.context(), u.truncation(), u.n_bound());
    FormalSeries power = u;
    for (int l = 1; l <= u.truncation() && !power.is_zero(); ++l) {
        out += power * coeff(l);
        power = series_mul(power, u);
    }
    return out;
}

}  // namespace detail

/// log(s) = sum_{l>=1} (-1)^{l-1}/l (s-1)^l; requires s(0) = 1.
inline FormalSeries series_log(const FormalSeries& s) {
    if (s.constant_term() != Rational(1)) throw DomainError("series_log needs constant term 1");
    FormalSeries u = s - FormalSeries::one(s.context(), s.truncation(), s.n_bound());
    return detail::power_sum(u, [](int l) { return Rational(l % 2 == 1 ? 1 : -1, l); });
}

/// exp(s) = sum_{l>=0} s^l / l!; requires s(0) = 0.
inline FormalSeries series_exp(const FormalSeries& s) {
    if (!s.constant_term().is_zero()) throw DomainError("series_exp needs constant term 0");
    FormalSeries out = FormalSeries::one(s.context(), s.truncation(), s.n_bound());
    FormalSeries term = out;
    for (int l = 1; l <= s.truncation(); ++l) {
        term = series_mul(term, s) * Rational(1, l);
        if (term.is_zero()) break;
        out += term;
    }
    return out;
}

/// s^e = exp(e log s) for rational e; requires s(0) = 1.
inline FormalSeries series_pow(const FormalSeries& s, const Rational& e) {
    return series_exp(series_log(s) * e);
}

}  // namespace dtcover
