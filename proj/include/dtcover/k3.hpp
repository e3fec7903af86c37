#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtcover/errors.hpp"
#include "dtcover/rational.hpp"

namespace dtcover::k3 {

/// (r, m c_1(L), n) on a K3 with Pic = Z L and L^2 = 2d - 2.
struct MukaiVector {
    std::int64_t r = 0;
    std::int64_t m = 0;
    std::int64_t d = 1;
    std::int64_t n = 0;
};

inline std::int64_t mukai_pairing(const MukaiVector& a, const MukaiVector& b) {
    if (a.d != b.d) throw DomainError("Mukai vectors over different lattices");
    return a.m * b.m * (2 * a.d - 2) - a.r * b.n - b.r * a.n;
}

/// chi(Hilb^0..Hilb^D) from prod (1 - q^k)^{-24}.
inline std::vector<BigInt> gottsche_coeffs(int D) {
    if (D < 0) throw DomainError("negative Gottsche truncation");
    std::vector<BigInt> c(static_cast<std::size_t>(D) + 1, 0);
    c[0] = 1;
    // Multiply by 1/(1 - q^k) twenty-four times for each k.
    for (int k = 1; k <= D; ++k)
        for (int rep = 0; rep < 24; ++rep)
            for (int i = k; i <= D; ++i) c[static_cast<std::size_t>(i)] += c[static_cast<std::size_t>(i - k)];
    return c;
}

inline bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

struct JResult {
    Rational value;
    bool conjectural = false;
    std::vector<std::string> warnings;
};

inline std::int64_t gcd_vector(const MukaiVector& v) {
    std::int64_t g = 0;
    for (auto x : {v.r, v.m, v.n}) {
        x = x < 0 ? -x : x;
        while (x) {
            g %= x;
            std::swap(g, x);
        }
    }
    return g;
}

/// J(v) = sum_{k | v} 1/k^2 chi(Hilb^{(v/k, v/k)/2 + 1}).
inline JResult j_value(const MukaiVector& v) {
    if (v.d < 1) throw DomainError("L^2 = 2d - 2 needs d >= 1");
    const auto g = gcd_vector(v);
    if (g == 0) throw DomainError("J of the zero Mukai vector");
    JResult out;
    out.conjectural = g > 1;
    std::vector<std::pair<std::int64_t, std::int64_t>> terms;  // (k, index)
    std::int64_t top = 0;
    for (std::int64_t k = 1; k <= g; ++k) {
        if (g % k) continue;
        const MukaiVector w{v.r / k, v.m / k, v.d, v.n / k};
        const auto pair = mukai_pairing(w, w);
        const auto idx = pair / 2 + 1;
        if (idx < 0) {
            out.warnings.push_back("negative Hilbert index " + std::to_string(idx) + " for k=" + std::to_string(k) +
                                   "; term taken as 0");
            continue;
        }
        terms.emplace_back(k, idx);
        top = std::max(top, idx);
    }
    const auto chi = gottsche_coeffs(static_cast<int>(top));
    for (auto [k, idx] : terms) out.value += Rational(chi[static_cast<std::size_t>(idx)]) * inverse_square(k);
    return out;
}

/// J(0, p c_1(L), 0) = chi(Hilb^{(d-1)p^2+1}) + chi(Hilb^d)/p^2.
inline Rational j_prime_case(std::int64_t d, std::int64_t p) {
    if (d < 1) throw DomainError("j_prime_case needs d >= 1");
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    const auto top = (d - 1) * p * p + 1;
    const auto chi = gottsche_coeffs(static_cast<int>(std::max(top, d)));
    return Rational(chi[static_cast<std::size_t>(top)]) + Rational(chi[static_cast<std::size_t>(d)]) * inverse_square(p);
}

}  // namespace dtcover::k3
