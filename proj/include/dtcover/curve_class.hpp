#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dtcover/errors.hpp"

namespace dtcover {

/// Effective one-cycle sum_i a_i [C_i] on the components of a fixed dual graph.
///
/// Stored densely, one non-negative coefficient per vertex of the graph it
/// lives on.  Ordering is lexicographic on the coefficient vector, which is
/// what every canonical sort in the engine relies on.
class CurveClass {
public:
    CurveClass() = default;
    explicit CurveClass(std::size_t components) : a_(components, 0) {}
    explicit CurveClass(std::vector<int> coefficients) : a_(std::move(coefficients)) {
        for (int c : a_)
            if (c < 0) throw DomainError("curve class coefficients must be non-negative");
    }
    CurveClass(std::initializer_list<int> coefficients) : CurveClass(std::vector<int>(coefficients)) {}

    static CurveClass unit(std::size_t components, std::size_t i, int multiplicity = 1) {
        CurveClass c(components);
        c.a_.at(i) = multiplicity;
        return c;
    }

    std::size_t size() const { return a_.size(); }
    int operator[](std::size_t i) const { return a_[i]; }
    int& at(std::size_t i) { return a_.at(i); }
    const std::vector<int>& coefficients() const { return a_; }

    /// d(gamma), the total multiplicity.
    int degree() const { return std::accumulate(a_.begin(), a_.end(), 0); }

    /// l(gamma), the number of components in the support.
    int length() const {
        return static_cast<int>(std::count_if(a_.begin(), a_.end(), [](int c) { return c > 0; }));
    }

    bool is_zero() const {
        return std::all_of(a_.begin(), a_.end(), [](int c) { return c == 0; });
    }

    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < a_.size(); ++i)
            if (a_[i] > 0) s.push_back(i);
        return s;
    }

    /// gcd of the coefficients; 0 for the zero class.
    int content() const {
        int g = 0;
        for (int c : a_) g = std::gcd(g, c);
        return g;
    }

    bool divisible_by(int k) const {
        return k > 0 && std::all_of(a_.begin(), a_.end(), [k](int c) { return c % k == 0; });
    }

    CurveClass divided_by(int k) const {
        if (!divisible_by(k)) throw DomainError("class is not divisible by " + std::to_string(k));
        CurveClass r = *this;
        for (int& c : r.a_) c /= k;
        return r;
    }

    CurveClass scaled(int k) const {
        CurveClass r = *this;
        for (int& c : r.a_) c *= k;
        return r;
    }

    /// Componentwise <=.
    bool fits_in(const CurveClass& bound) const {
        check_same(bound);
        for (std::size_t i = 0; i < a_.size(); ++i)
            if (a_[i] > bound.a_[i]) return false;
        return true;
    }

    CurveClass& operator+=(const CurveClass& o) {
        check_same(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    CurveClass& operator-=(const CurveClass& o) {
        check_same(o);
        for (std::size_t i = 0; i < a_.size(); ++i) {
            a_[i] -= o.a_[i];
            if (a_[i] < 0) throw DomainError("curve class subtraction went negative");
        }
        return *this;
    }
    friend CurveClass operator+(CurveClass a, const CurveClass& b) { return a += b; }
    friend CurveClass operator-(CurveClass a, const CurveClass& b) { return a -= b; }

    friend bool operator==(const CurveClass&, const CurveClass&) = default;
    friend std::strong_ordering operator<=>(const CurveClass& a, const CurveClass& b) {
        return a.a_ <=> b.a_;
    }

    /// "a1,a2,...", the CLI's multidegree syntax.
    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < a_.size(); ++i) os << (i ? "," : "") << a_[i];
        return os.str();
    }

    static CurveClass parse(const std::string& text) {
        std::vector<int> coeffs;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(item, &used);
            } catch (const std::exception&) {
                throw ConfigError("malformed multidegree '" + text + "'");
            }
            while (used < item.size() && item[used] == ' ') ++used;
            if (used != item.size() || v < 0) throw ConfigError("malformed multidegree '" + text + "'");
            coeffs.push_back(v);
        }
        if (coeffs.empty()) throw ConfigError("empty multidegree");
        return CurveClass(std::move(coeffs));
    }

private:
    void check_same(const CurveClass& o) const {
        if (o.a_.size() != a_.size()) throw ContextError("curve classes on different graphs");
    }

    std::vector<int> a_;
};

/// Every class c with 0 <= c <= bound componentwise, in lexicographic order.
inline std::vector<CurveClass> classes_below(const CurveClass& bound) {
    std::vector<CurveClass> out;
    std::vector<int> cur(bound.size(), 0);
    while (true) {
        out.emplace_back(cur);
        std::size_t i = cur.size();
        bool advanced = false;
        while (i > 0 && !advanced) {
            --i;
            if (cur[i] < bound[i]) {
                ++cur[i];
                std::fill(cur.begin() + static_cast<std::ptrdiff_t>(i) + 1, cur.end(), 0);
                advanced = true;
            }
        }
        if (!advanced) return out;
    }
}

/// Every nonzero class on `components` vertices with degree <= max_degree.
inline std::vector<CurveClass> classes_up_to_degree(std::size_t components, int max_degree) {
    std::vector<CurveClass> out;
    std::vector<int> cur(components, 0);
    auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
        if (i == components) {
            CurveClass c(cur);
            if (!c.is_zero()) out.push_back(std::move(c));
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur[i] = v;
            self(self, i + 1, remaining - v);
        }
        cur[i] = 0;
    };
    rec(rec, 0, max_degree);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace dtcover
