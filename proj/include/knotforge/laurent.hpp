#pragma once

// Exact sparse Laurent polynomials over the Gaussian integers in named
// variables.  Exponents live on a quarter-integer lattice (stored as
// 4 * actual exponent), which is enough for the half and quarter powers
// that show up in knot polynomial identities such as A = t^(-1/4).

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace knotforge {

// Exact Gaussian integer re + im*i.
struct GaussInt {
    long long re = 0;
    long long im = 0;

    GaussInt() = default;
    GaussInt(long long r) : re(r) {}
    GaussInt(long long r, long long i) : re(r), im(i) {}

    static GaussInt i() { return GaussInt(0, 1); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    bool is_imaginary() const { return re == 0; }

    // Units of Z[i] are the powers of i.  Returns k with *this == i^k, if a unit.
    std::optional<int> unit_log() const {
        if (re == 1 && im == 0) return 0;
        if (re == 0 && im == 1) return 1;
        if (re == -1 && im == 0) return 2;
        if (re == 0 && im == -1) return 3;
        return std::nullopt;
    }
    static GaussInt unit_from_log(long long k) {
        switch (((k % 4) + 4) % 4) {
            case 0: return GaussInt(1);
            case 1: return GaussInt(0, 1);
            case 2: return GaussInt(-1);
            default: return GaussInt(0, -1);
        }
    }

    GaussInt operator-() const { return GaussInt(-re, -im); }
    GaussInt conj() const { return GaussInt(re, -im); }

    friend GaussInt operator+(GaussInt a, GaussInt b) { return GaussInt(a.re + b.re, a.im + b.im); }
    friend GaussInt operator-(GaussInt a, GaussInt b) { return GaussInt(a.re - b.re, a.im - b.im); }
    friend GaussInt operator*(GaussInt a, GaussInt b) {
        return GaussInt(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend bool operator==(GaussInt a, GaussInt b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(GaussInt a, GaussInt b) { return !(a == b); }

    // Exact division in Z[i]; nullopt when b does not divide a.
    static std::optional<GaussInt> divide_exact(GaussInt a, GaussInt b) {
        if (b.is_zero()) return std::nullopt;
        long long n = b.re * b.re + b.im * b.im;
        GaussInt num = a * b.conj();
        if (num.re % n != 0 || num.im % n != 0) return std::nullopt;
        return GaussInt(num.re / n, num.im / n);
    }

    std::string to_string() const {
        std::ostringstream os;
        if (im == 0) {
            os << re;
        } else if (re == 0) {
            if (im == 1)
                os << "i";
            else if (im == -1)
                os << "-i";
            else
                os << im << "i";
        } else {
            os << "(" << re << (im > 0 ? "+" : "-") << (std::llabs(im) == 1 ? "" : std::to_string(std::llabs(im)))
               << "i)";
        }
        return os.str();
    }
};

// Rational exponent with denominator 1, 2 or 4, stored in quarter units.
struct Exponent {
    int quarters = 0;

    static Exponent integer(int k) { return Exponent{4 * k}; }
    static Exponent half(int num) { return Exponent{2 * num}; }       // num/2
    static Exponent quarter(int num) { return Exponent{num}; }        // num/4
    static Exponent rational(int num, int den) {
        require(den == 1 || den == 2 || den == 4, errc::domain_error,
                "exponent denominator must be 1, 2 or 4");
        return Exponent{num * (4 / den)};
    }

    bool is_integer() const { return quarters % 4 == 0; }
    bool is_half_integral() const { return quarters % 2 == 0; }
    int numerator() const {
        if (quarters % 4 == 0) return quarters / 4;
        if (quarters % 2 == 0) return quarters / 2;
        return quarters;
    }
    int denominator() const {
        if (quarters % 4 == 0) return 1;
        if (quarters % 2 == 0) return 2;
        return 4;
    }

    friend bool operator==(Exponent a, Exponent b) { return a.quarters == b.quarters; }

    std::string to_string() const {
        if (is_integer()) return std::to_string(quarters / 4);
        std::ostringstream os;
        os << "(" << numerator() << "/" << denominator() << ")";
        return os.str();
    }
};

class LaurentPoly {
  public:
    struct Term {
        std::vector<int> quarters;  // one entry per variable, quarter units
        GaussInt c;
    };

    LaurentPoly() = default;

    static LaurentPoly zero() { return LaurentPoly(); }

    static LaurentPoly constant(GaussInt c) {
        LaurentPoly p;
        if (!c.is_zero()) p.terms_[{}] = c;
        return p;
    }
    static LaurentPoly constant(long long c) { return constant(GaussInt(c)); }

    static LaurentPoly variable(const std::string& name, Exponent e = Exponent::integer(1)) {
        return monomial(GaussInt(1), {{name, e}});
    }

    static LaurentPoly monomial(GaussInt c, const std::vector<std::pair<std::string, Exponent>>& pows) {
        LaurentPoly p;
        if (c.is_zero()) return p;
        std::vector<std::pair<std::string, int>> items;
        for (const auto& [name, e] : pows) {
            if (e.quarters != 0) items.emplace_back(name, e.quarters);
        }
        std::sort(items.begin(), items.end());
        std::vector<int> key;
        for (auto& [name, q] : items) {
            require(p.vars_.empty() || p.vars_.back() != name, errc::domain_error,
                    "duplicate variable in monomial: " + name);
            p.vars_.push_back(name);
            key.push_back(q);
        }
        p.terms_[key] = c;
        return p;
    }

    const std::vector<std::string>& variables() const { return vars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && vars_.empty()); }
    GaussInt constant_value() const {
        if (terms_.empty()) return GaussInt(0);
        require(is_constant(), errc::domain_error, "polynomial is not constant");
        return terms_.begin()->second;
    }
    bool is_integral() const {
        for (auto& [e, c] : terms_)
            if (c.im != 0) return false;
        return true;
    }
    size_t term_count() const { return terms_.size(); }

    std::vector<Term> terms() const {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (auto& [e, c] : terms_) out.push_back({e, c});
        return out;
    }

    static LaurentPoly from_terms(std::vector<std::string> vars, const std::vector<Term>& ts) {
        LaurentPoly p;
        std::vector<size_t> order(vars.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return vars[a] < vars[b]; });
        for (size_t i = 0; i < order.size(); ++i) p.vars_.push_back(vars[order[i]]);
        for (size_t i = 1; i < p.vars_.size(); ++i)
            require(p.vars_[i - 1] != p.vars_[i], errc::domain_error, "duplicate variable");
        for (const auto& t : ts) {
            require(t.quarters.size() == vars.size(), errc::domain_error,
                    "term exponent arity mismatch");
            std::vector<int> key(order.size());
            for (size_t i = 0; i < order.size(); ++i) key[i] = t.quarters[order[i]];
            auto it = p.terms_.find(key);
            if (it == p.terms_.end())
                p.terms_[key] = t.c;
            else
                it->second = it->second + t.c;
        }
        p.prune();
        return p;
    }

    // All exponents of every variable are integers.
    bool has_integer_exponents() const {
        for (auto& [e, c] : terms_)
            for (int q : e)
                if (q % 4 != 0) return false;
        return true;
    }

    // min/max exponent of var over all terms, in quarter units.  Zero poly -> (0, 0).
    std::pair<int, int> exponent_span(const std::string& var) const {
        int idx = var_index(var);
        if (idx < 0 || terms_.empty()) return {0, 0};
        int lo = 0, hi = 0;
        bool first = true;
        for (auto& [e, c] : terms_) {
            int q = e[idx];
            if (first) {
                lo = hi = q;
                first = false;
            } else {
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        }
        return {lo, hi};
    }

    GaussInt coeff(const std::vector<std::pair<std::string, Exponent>>& pows) const {
        std::vector<int> key(vars_.size(), 0);
        for (auto& [name, e] : pows) {
            int idx = var_index(name);
            if (idx < 0) {
                if (e.quarters != 0) return GaussInt(0);
                continue;
            }
            key[idx] = e.quarters;
        }
        auto it = terms_.find(key);
        return it == terms_.end() ? GaussInt(0) : it->second;
    }

    LaurentPoly operator-() const {
        LaurentPoly out = *this;
        for (auto& [e, c] : out.terms_) c = -c;
        return out;
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        auto [x, y] = aligned(a, b);
        for (auto& [e, c] : y.terms_) {
            auto it = x.terms_.find(e);
            if (it == x.terms_.end())
                x.terms_[e] = c;
            else
                it->second = it->second + c;
        }
        x.prune();
        return x;
    }
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        auto [x, y] = aligned(a, b);
        LaurentPoly out;
        out.vars_ = x.vars_;
        for (auto& [ea, ca] : x.terms_) {
            for (auto& [eb, cb] : y.terms_) {
                std::vector<int> e(ea.size());
                for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                GaussInt c = ca * cb;
                auto it = out.terms_.find(e);
                if (it == out.terms_.end())
                    out.terms_[e] = c;
                else
                    it->second = it->second + c;
            }
        }
        out.prune();
        return out;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        auto [x, y] = aligned(a, b);
        return x.terms_ == y.terms_;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    // Total order for use as a map key (canonical forms compare structurally).
    friend bool operator<(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.vars_ != b.vars_) return a.vars_ < b.vars_;
        auto cmp = [](const std::pair<const std::vector<int>, GaussInt>& x,
                      const std::pair<const std::vector<int>, GaussInt>& y) {
            if (x.first != y.first) return x.first < y.first;
            if (x.second.re != y.second.re) return x.second.re < y.second.re;
            return x.second.im < y.second.im;
        };
        return std::lexicographical_compare(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                                            b.terms_.end(), cmp);
    }

    // Integer power.  Negative powers require an invertible (single-term, unit
    // coefficient) polynomial.
    LaurentPoly pow(long long k) const {
        if (k == 0) return constant(1);
        if (k < 0) {
            LaurentPoly inv = inverse();
            return inv.pow(-k);
        }
        LaurentPoly base = *this;
        LaurentPoly out = constant(1);
        while (k > 0) {
            if (k & 1) out *= base;
            base *= base;
            k >>= 1;
        }
        return out;
    }

    // Inverse of a single-term polynomial with unit coefficient.
    LaurentPoly inverse() const {
        require(terms_.size() == 1, errc::domain_error, "only monomials are invertible");
        auto& [e, c] = *terms_.begin();
        auto k = c.unit_log();
        require(k.has_value(), errc::domain_error, "monomial coefficient is not a unit");
        LaurentPoly out;
        out.vars_ = vars_;
        std::vector<int> me(e.size());
        for (size_t i = 0; i < e.size(); ++i) me[i] = -e[i];
        out.terms_[me] = GaussInt::unit_from_log(-*k);
        return out;
    }

    // Substitute each bound variable by its binding polynomial, exactly.
    // Unbound variables are left alone.  Negative powers of a multi-term
    // binding are handled by clearing denominators and dividing exactly.
    LaurentPoly substitute(const std::map<std::string, LaurentPoly>& bindings) const {
        if (terms_.empty()) return zero();
        struct Plan {
            const LaurentPoly* binding = nullptr;  // null = keep variable
            bool monomial = false;
            long long shift = 0;  // extra whole powers multiplied in (multi-term case)
        };
        std::vector<Plan> plans(vars_.size());
        for (size_t i = 0; i < vars_.size(); ++i) {
            auto it = bindings.find(vars_[i]);
            if (it == bindings.end()) continue;
            plans[i].binding = &it->second;
            plans[i].monomial = it->second.term_count() <= 1;
            if (!plans[i].monomial) {
                auto [lo, hi] = exponent_span(vars_[i]);
                for (auto& [e, c] : terms_)
                    require(e[i] % 4 == 0, errc::half_power_unresolvable,
                            "fractional power of variable '" + vars_[i] +
                                "' cannot take a multi-term substitution");
                if (lo < 0) plans[i].shift = -lo / 4;
            }
        }

        LaurentPoly num = zero();
        for (auto& [e, c] : terms_) {
            LaurentPoly prod = constant(c);
            for (size_t i = 0; i < vars_.size(); ++i) {
                const Plan& pl = plans[i];
                if (!pl.binding) {
                    if (e[i] != 0)
                        prod *= monomial(GaussInt(1), {{vars_[i], Exponent::quarter(e[i])}});
                    continue;
                }
                if (pl.monomial) {
                    prod *= monomial_power(*pl.binding, e[i], vars_[i]);
                } else {
                    prod *= pl.binding->pow(e[i] / 4 + pl.shift);
                }
            }
            num += prod;
        }

        for (size_t i = 0; i < vars_.size(); ++i) {
            if (plans[i].shift > 0) {
                LaurentPoly den = plans[i].binding->pow(plans[i].shift);
                auto q = divide_exact(num, den);
                require(q.has_value(), errc::half_power_unresolvable,
                        "substitution for '" + vars_[i] + "' does not divide exactly");
                num = *q;
            }
        }
        return num;
    }

    // Negate every exponent of var (the x -> 1/x substitution).
    LaurentPoly mirror_image(const std::string& var) const {
        int idx = var_index(var);
        if (idx < 0) return *this;
        LaurentPoly out;
        out.vars_ = vars_;
        for (auto& [e, c] : terms_) {
            std::vector<int> me = e;
            me[idx] = -me[idx];
            out.terms_[me] = c;
        }
        return out;
    }

    // Exact polynomial division; nullopt if den does not divide num.
    static std::optional<LaurentPoly> divide_exact(const LaurentPoly& num, const LaurentPoly& den) {
        require(!den.is_zero(), errc::domain_error, "division by zero polynomial");
        if (num.is_zero()) return zero();
        auto [n, d] = aligned(num, den);
        auto dlead = std::prev(d.terms_.end());
        LaurentPoly q;
        q.vars_ = n.vars_;
        size_t guard = 1000000;  // inexact Laurent division need not terminate
        while (!n.terms_.empty()) {
            if (guard-- == 0) return std::nullopt;
            auto nlead = std::prev(n.terms_.end());
            auto c = GaussInt::divide_exact(nlead->second, dlead->second);
            if (!c) return std::nullopt;
            std::vector<int> e(nlead->first.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = nlead->first[i] - dlead->first[i];
            LaurentPoly t;
            t.vars_ = n.vars_;
            t.terms_[e] = *c;
            q += t;
            n -= t * d;
        }
        return q;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // Descending lexicographic exponent order.
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            GaussInt c = it->second;
            bool neg = c.is_real() ? c.re < 0 : (c.is_imaginary() && c.im < 0);
            GaussInt mag = neg ? -c : c;
            if (first) {
                if (neg) os << "-";
                first = false;
            } else {
                os << (neg ? " - " : " + ");
            }
            std::string mono = monomial_string(it->first);
            bool unit_mag = (mag == GaussInt(1));
            if (mono.empty()) {
                os << mag.to_string();
            } else if (unit_mag) {
                os << mono;
            } else {
                os << mag.to_string() << " " << mono;
            }
        }
        return os.str();
    }

  private:
    std::vector<std::string> vars_;
    std::map<std::vector<int>, GaussInt> terms_;

    int var_index(const std::string& name) const {
        auto it = std::lower_bound(vars_.begin(), vars_.end(), name);
        if (it == vars_.end() || *it != name) return -1;
        return int(it - vars_.begin());
    }

    // Drop zero terms and unused variables (canonical sparse form).
    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->second.is_zero())
                it = terms_.erase(it);
            else
                ++it;
        }
        if (vars_.empty()) return;
        std::vector<bool> used(vars_.size(), false);
        for (auto& [e, c] : terms_)
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0) used[i] = true;
        if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return;
        std::vector<std::string> nv;
        for (size_t i = 0; i < vars_.size(); ++i)
            if (used[i]) nv.push_back(vars_[i]);
        std::map<std::vector<int>, GaussInt> nt;
        for (auto& [e, c] : terms_) {
            std::vector<int> ne;
            for (size_t i = 0; i < e.size(); ++i)
                if (used[i]) ne.push_back(e[i]);
            nt[ne] = c;
        }
        vars_ = std::move(nv);
        terms_ = std::move(nt);
    }

    LaurentPoly embedded(const std::vector<std::string>& union_vars) const {
        if (union_vars == vars_) return *this;
        LaurentPoly out;
        out.vars_ = union_vars;
        std::vector<int> pos(vars_.size());
        for (size_t i = 0; i < vars_.size(); ++i) {
            auto it = std::lower_bound(union_vars.begin(), union_vars.end(), vars_[i]);
            pos[i] = int(it - union_vars.begin());
        }
        for (auto& [e, c] : terms_) {
            std::vector<int> ne(union_vars.size(), 0);
            for (size_t i = 0; i < e.size(); ++i) ne[pos[i]] = e[i];
            out.terms_[ne] = c;
        }
        return out;
    }

    static std::pair<LaurentPoly, LaurentPoly> aligned(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.vars_ == b.vars_) return {a, b};
        std::vector<std::string> u;
        std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                       std::back_inserter(u));
        return {a.embedded(u), b.embedded(u)};
    }

    // binding^(q/4) where binding has at most one term.  q in quarter units.
    static LaurentPoly monomial_power(const LaurentPoly& binding, int q, const std::string& var) {
        if (q == 0) return constant(1);
        if (binding.is_zero()) {
            require(q > 0, errc::half_power_unresolvable,
                    "zero substituted for '" + var + "' with negative exponent");
            return zero();
        }
        auto& [e, c] = *binding.terms_.begin();
        // Coefficient part: c^(q/4).
        GaussInt cc;
        if (q % 4 == 0) {
            long long k = q / 4;
            if (k > 0) {
                cc = GaussInt(1);
                for (long long j = 0; j < k; ++j) cc = cc * c;
            } else {
                auto ul = c.unit_log();
                require(ul.has_value(), errc::half_power_unresolvable,
                        "negative power of non-unit coefficient for '" + var + "'");
                cc = GaussInt::unit_from_log(*ul * k);
            }
        } else {
            auto ul = c.unit_log();
            require(ul.has_value(), errc::half_power_unresolvable,
                    "fractional power of non-unit coefficient for '" + var + "'");
            long long num = static_cast<long long>(*ul) * q;
            require(num % 4 == 0, errc::half_power_unresolvable,
                    "no exact root for substitution of '" + var + "'");
            cc = GaussInt::unit_from_log(num / 4);
        }
        LaurentPoly out;
        out.vars_ = binding.vars_;
        std::vector<int> ne(e.size());
        for (size_t i = 0; i < e.size(); ++i) {
            long long v = static_cast<long long>(e[i]) * q;
            require(v % 4 == 0, errc::half_power_unresolvable,
                    "substitution exponent for '" + var + "' leaves the quarter lattice");
            ne[i] = int(v / 4);
        }
        out.terms_[ne] = cc;
        out.prune();
        return out;
    }

    std::string monomial_string(const std::vector<int>& e) const {
        std::ostringstream os;
        bool any = false;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (any) os << " ";
            any = true;
            os << vars_[i];
            if (e[i] != 4) os << "^" << Exponent::quarter(e[i]).to_string();
        }
        return os.str();
    }
};

// The exact-evaluation domain Z[i, s, 1/s]: a Gaussian-coefficient Laurent
// polynomial in a formal half-power symbol.
using ExactValue = LaurentPoly;

}  // namespace knotforge
