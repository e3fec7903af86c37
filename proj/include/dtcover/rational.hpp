#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "dtcover/errors.hpp"

namespace dtcover {

using BigInt = mpz_class;

/// Exact rational number in lowest terms with positive denominator.
///
/// Thin value wrapper over GMP's mpq_class; every constructor and operator
/// leaves the value canonicalized.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t value) : q_(static_cast<long>(value)) {}  // NOLINT(implicit)
    Rational(const BigInt& value) : q_(value) {}                    // NOLINT(implicit)
    Rational(std::int64_t num, std::int64_t den) {
        if (den == 0) throw DomainError("rational with zero denominator");
        q_ = mpq_class(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
        q_.canonicalize();
    }
    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw DomainError("rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }

    /// Parses "p", "-p" or "p/q" (optional surrounding whitespace).
    static Rational parse(std::string_view text) {
        auto trim = [](std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
            return s;
        };
        text = trim(text);
        auto is_integer = [](std::string_view s) {
            if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
            if (s.empty()) return false;
            for (char c : s)
                if (c < '0' || c > '9') return false;
            return true;
        };
        auto to_bigint = [](std::string_view s) {
            if (!s.empty() && s.front() == '+') s.remove_prefix(1);
            return BigInt(std::string(s), 10);
        };
        const auto slash = text.find('/');
        if (slash == std::string_view::npos) {
            if (!is_integer(text)) throw ConfigError("malformed rational '" + std::string(text) + "'");
            return Rational(to_bigint(text));
        }
        const auto num = trim(text.substr(0, slash));
        const auto den = trim(text.substr(slash + 1));
        if (!is_integer(num) || !is_integer(den) || den.front() == '-' || den.front() == '+')
            throw ConfigError("malformed rational '" + std::string(text) + "'");
        const BigInt d = to_bigint(den);
        if (d == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
        return Rational(to_bigint(num), d);
    }

    BigInt numerator() const { return q_.get_num(); }
    BigInt denominator() const { return q_.get_den(); }
    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    /// "p" for integers, "p/q" otherwise.
    std::string str() const {
        if (is_integer()) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    const mpq_class& raw() const { return q_; }

    Rational operator-() const { return from_raw(-q_); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw DomainError("division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    static Rational from_raw(mpq_class q) {
        Rational r;
        r.q_ = std::move(q);
        return r;
    }

    mpq_class q_{0};
};

/// (-1)^e for a possibly negative exponent.
inline int sign_power(std::int64_t e) { return (e % 2 == 0) ? 1 : -1; }

inline Rational inverse_square(std::int64_t k) { return Rational(1, k * k); }

}  // namespace dtcover
