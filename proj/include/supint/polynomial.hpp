// SPDX-License-Identifier: Apache-2.0
//
// Sparse multivariate (Laurent) polynomials over the Gaussian rationals.
// Monomials are kept in graded-lexicographic order (generators before
// radicals before parameters) so every polynomial has a unique, stable
// canonical form.  Quadratic-relation reduction (c^2 -> 1-s^2, R^2 -> rho)
// is applied by the chart layer through reduce_relations().
#pragma once

#include "supint/rational.hpp"
#include "supint/symbols.hpp"

#include <algorithm>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace supint {

// ---------------------------------------------------------------------------
// Monomial: sorted (symbol, exponent) pairs; exponents may be negative for
// invertible generators (Laurent charts).
// ---------------------------------------------------------------------------
struct Monomial {
    std::vector<std::pair<Symbol, int>> e;  // sorted by sym_cmp, exponents != 0

    bool empty() const { return e.empty(); }

    long total_degree() const {
        long d = 0;
        for (auto& [s, k] : e) d += k;
        return d;
    }

    int exponent(Symbol s) const {
        for (auto& [t, k] : e)
            if (t == s) return k;
        return 0;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }

    // graded lex, generators-first symbol order.
    static int cmp(const Monomial& a, const Monomial& b) {
        long da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db ? -1 : 1;
        std::size_t i = 0, j = 0;
        while (i < a.e.size() && j < b.e.size()) {
            int c = sym_cmp(a.e[i].first, b.e[j].first);
            if (c < 0) {
                // a has an earlier variable; its exponent vs b's implicit 0
                return a.e[i].second > 0 ? 1 : -1;
            }
            if (c > 0) return b.e[j].second > 0 ? -1 : 1;
            if (a.e[i].second != b.e[j].second)
                return a.e[i].second > b.e[j].second ? 1 : -1;
            ++i;
            ++j;
        }
        if (i < a.e.size()) return a.e[i].second > 0 ? 1 : -1;
        if (j < b.e.size()) return b.e[j].second > 0 ? -1 : 1;
        return 0;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r;
        r.e.reserve(a.e.size() + b.e.size());
        std::size_t i = 0, j = 0;
        while (i < a.e.size() && j < b.e.size()) {
            int c = sym_cmp(a.e[i].first, b.e[j].first);
            if (c < 0) r.e.push_back(a.e[i++]);
            else if (c > 0) r.e.push_back(b.e[j++]);
            else {
                int k = a.e[i].second + b.e[j].second;
                if (k != 0) r.e.emplace_back(a.e[i].first, k);
                ++i;
                ++j;
            }
        }
        while (i < a.e.size()) r.e.push_back(a.e[i++]);
        while (j < b.e.size()) r.e.push_back(b.e[j++]);
        return r;
    }

    // a / b, or nullopt if some exponent would need to go below what a has
    // (used for polynomial division; requires all exponents of b present in a
    // with the same sign budget).  For ordinary (non-negative) monomials this
    // is plain divisibility.
    static std::optional<Monomial> divide(const Monomial& a, const Monomial& b) {
        Monomial r;
        std::size_t i = 0, j = 0;
        while (j < b.e.size()) {
            if (i >= a.e.size()) return std::nullopt;
            int c = sym_cmp(a.e[i].first, b.e[j].first);
            if (c < 0) {
                r.e.push_back(a.e[i++]);
            } else if (c > 0) {
                return std::nullopt;
            } else {
                int k = a.e[i].second - b.e[j].second;
                if (k < 0) return std::nullopt;
                if (k != 0) r.e.emplace_back(a.e[i].first, k);
                ++i;
                ++j;
            }
        }
        while (i < a.e.size()) r.e.push_back(a.e[i++]);
        return r;
    }

    Monomial pow(int k) const {
        Monomial r;
        if (k == 0) return r;
        r.e = e;
        for (auto& [s, x] : r.e) x *= k;
        return r;
    }
};

struct MonomialGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return Monomial::cmp(a, b) > 0; }
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const {
        std::size_t h = 1469598103934665603ull;
        for (auto& [s, k] : m.e) {
            h = (h ^ s) * 1099511628211ull;
            h = (h ^ static_cast<std::size_t>(static_cast<unsigned>(k))) * 1099511628211ull;
        }
        return h;
    }
};

// ---------------------------------------------------------------------------
// Polynomial: term list in strictly decreasing monomial order.
// ---------------------------------------------------------------------------
class Polynomial {
public:
    struct Term {
        Monomial m;
        GaussianRational c;
    };

    Polynomial() = default;
    Polynomial(GaussianRational c) {  // NOLINT(google-explicit-constructor)
        if (!c.is_zero()) terms_.push_back({Monomial{}, std::move(c)});
    }
    Polynomial(long v) : Polynomial(GaussianRational(v)) {}  // NOLINT

    static Polynomial variable(Symbol s, int exp = 1) {
        Polynomial p;
        if (exp == 0) return Polynomial(1);
        Monomial m;
        m.e.emplace_back(s, exp);
        p.terms_.push_back({std::move(m), GaussianRational(1)});
        return p;
    }

    static Polynomial from_terms(std::map<Monomial, GaussianRational, MonomialGreater>&& acc) {
        Polynomial p;
        p.terms_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (!c.is_zero()) p.terms_.push_back({m, std::move(c)});
        return p;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.empty()); }
    GaussianRational constant_value() const {
        if (is_zero()) return GaussianRational(0);
        if (!is_constant()) throw std::logic_error("Polynomial: not a constant");
        return terms_[0].c;
    }
    const Term& leading() const {
        if (is_zero()) throw std::logic_error("Polynomial: leading term of zero");
        return terms_[0];
    }
    std::size_t size() const { return terms_.size(); }
    long total_degree() const {
        long d = 0;
        for (auto& t : terms_) d = std::max(d, t.m.total_degree());
        return d;
    }

    int degree_in(Symbol s) const {
        int d = 0;
        for (auto& t : terms_) d = std::max(d, t.m.exponent(s));
        return d;
    }
    int min_exponent_in(Symbol s) const {
        int d = 0;
        bool first = true;
        for (auto& t : terms_) {
            int k = t.m.exponent(s);
            if (first || k < d) d = k;
            first = false;
        }
        return d;
    }
    bool depends_on(Symbol s) const {
        for (auto& t : terms_)
            if (t.m.exponent(s) != 0) return true;
        return false;
    }
    std::vector<Symbol> variables() const {
        std::vector<Symbol> vs;
        for (auto& t : terms_)
            for (auto& [s, k] : t.m.e)
                if (std::find(vs.begin(), vs.end(), s) == vs.end()) vs.push_back(s);
        std::sort(vs.begin(), vs.end(), [](Symbol a, Symbol b) { return sym_cmp(a, b) < 0; });
        return vs;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        Polynomial r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() && j < b.terms_.size()) {
            int c = Monomial::cmp(a.terms_[i].m, b.terms_[j].m);
            if (c > 0) r.terms_.push_back(a.terms_[i++]);
            else if (c < 0) r.terms_.push_back(b.terms_[j++]);
            else {
                GaussianRational s = a.terms_[i].c + b.terms_[j].c;
                if (!s.is_zero()) r.terms_.push_back({a.terms_[i].m, std::move(s)});
                ++i;
                ++j;
            }
        }
        while (i < a.terms_.size()) r.terms_.push_back(a.terms_[i++]);
        while (j < b.terms_.size()) r.terms_.push_back(b.terms_[j++]);
        return r;
    }
    friend Polynomial operator-(const Polynomial& a) {
        Polynomial r = a;
        for (auto& t : r.terms_) t.c = -t.c;
        return r;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (b.terms_.size() == 1) return a.mul_term(b.terms_[0]);
        if (a.terms_.size() == 1) return b.mul_term(a.terms_[0]);
        std::unordered_map<Monomial, GaussianRational, MonomialHash> acc;
        acc.reserve(a.terms_.size() + b.terms_.size());
        for (auto& ta : a.terms_)
            for (auto& tb : b.terms_) {
                GaussianRational c = ta.c * tb.c;
                auto [it, fresh] = acc.try_emplace(ta.m * tb.m);
                if (fresh) it->second = std::move(c);
                else it->second += c;
            }
        Polynomial r;
        r.terms_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (!c.is_zero()) r.terms_.push_back({m, std::move(c)});
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& x, const Term& y) { return Monomial::cmp(x.m, y.m) > 0; });
        return r;
    }

    Polynomial mul_term(const Term& t) const {
        Polynomial r;
        r.terms_.reserve(terms_.size());
        for (auto& u : terms_) r.terms_.push_back({u.m * t.m, u.c * t.c});
        // multiplying by a single monomial preserves the order
        return r;
    }
    friend Polynomial operator*(const Polynomial& a, const GaussianRational& c) {
        if (c.is_zero()) return {};
        Polynomial r = a;
        for (auto& t : r.terms_) t.c *= c;
        return r;
    }
    friend Polynomial operator*(const GaussianRational& c, const Polynomial& a) { return a * c; }
    Polynomial& operator+=(const Polynomial& b) { *this = *this + b; return *this; }
    Polynomial& operator-=(const Polynomial& b) { *this = *this - b; return *this; }
    Polynomial& operator*=(const Polynomial& b) { *this = *this * b; return *this; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (!(a.terms_[i].m == b.terms_[i].m) || a.terms_[i].c != b.terms_[i].c) return false;
        return true;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    Polynomial pow(int k) const {
        if (k < 0) throw std::domain_error("Polynomial::pow: negative exponent");
        Polynomial acc(1), base = *this;
        while (k > 0) {
            if (k & 1) acc *= base;
            base = base * base;
            k >>= 1;
        }
        return acc;
    }

    // Substitute sym -> value (value must be a polynomial; negative exponents
    // of sym are rejected — fraction-level substitution lives in ChartElement).
    Polynomial substitute(Symbol sym, const Polynomial& value) const {
        Polynomial r;
        std::vector<Polynomial> pow_cache{Polynomial(1)};
        for (auto& t : terms_) {
            int k = t.m.exponent(sym);
            if (k < 0) throw std::domain_error("Polynomial::substitute: negative exponent of substituted symbol");
            Monomial rest;
            for (auto& [s, x] : t.m.e)
                if (s != sym) rest.e.emplace_back(s, x);
            while ((int)pow_cache.size() <= k) pow_cache.push_back(pow_cache.back() * value);
            Polynomial piece = pow_cache[k].mul_term({rest, t.c});
            r += piece;
        }
        return r;
    }

    // Derivative where each symbol's derivative is given by `rule` (nullptr
    // or missing => derivative zero).  rule(s) returns d(s)/dvar as a
    // polynomial in the ring.
    Polynomial differentiate(const std::function<const Polynomial*(Symbol)>& rule) const {
        Polynomial r;
        for (auto& t : terms_) {
            for (std::size_t vi = 0; vi < t.m.e.size(); ++vi) {
                auto [s, k] = t.m.e[vi];
                const Polynomial* ds = rule(s);
                if (ds == nullptr || ds->is_zero()) continue;
                // d/dvar (s^k * rest) = k s^{k-1} ds * rest
                Monomial m = t.m;
                m.e[vi].second -= 1;
                if (m.e[vi].second == 0) m.e.erase(m.e.begin() + (long)vi);
                Polynomial piece = ds->mul_term({m, t.c * GaussianRational(k)});
                r += piece;
            }
        }
        return r;
    }

    std::complex<double> evaluate(const std::function<std::complex<double>(Symbol)>& val) const {
        std::complex<double> acc = 0.0;
        for (auto& t : terms_) {
            std::complex<double> v = t.c.to_complex();
            for (auto& [s, k] : t.m.e) {
                std::complex<double> x = val(s);
                v *= (k >= 0) ? std::pow(x, k) : 1.0 / std::pow(x, -k);
            }
            acc += v;
        }
        return acc;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& t : terms_) {
            std::string cs = t.c.str();
            bool neg = false;
            // pull a leading '-' out of purely-real or purely-imaginary coefficients
            if (!cs.empty() && cs[0] == '-' && cs.find('+') == std::string::npos &&
                cs.find('-', 1) == std::string::npos) {
                neg = true;
                cs = cs.substr(1);
            }
            if (first) {
                if (neg) os << "-";
            } else {
                os << (neg ? " - " : " + ");
            }
            first = false;
            bool coeff_is_one = (cs == "1");
            bool need_paren = cs.find('+') != std::string::npos || cs.find('-') != std::string::npos;
            if (t.m.empty()) {
                os << (need_paren ? "(" + cs + ")" : cs);
                continue;
            }
            if (!coeff_is_one) os << (need_paren ? "(" + cs + ")" : cs) << "*";
            bool firstv = true;
            for (auto& [s, k] : t.m.e) {
                if (!firstv) os << "*";
                firstv = false;
                os << sym_name(s);
                if (k != 1) os << "^" << k;
            }
        }
        return os.str();
    }

private:
    std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Quadratic-relation reduction.  relation(s) returns the polynomial equal to
// s^2, or nullptr when s has no relation.  Exponents of relational symbols
// are reduced into {0,1}.  Relational symbols must never carry negative
// exponents.
// ---------------------------------------------------------------------------
inline Polynomial reduce_relations(const Polynomial& p,
                                   const std::function<const Polynomial*(Symbol)>& relation) {
    Polynomial cur = p;
    for (;;) {
        // find a term with a reducible exponent
        bool changed = false;
        Polynomial next;
        std::map<Monomial, GaussianRational, MonomialGreater> acc;
        for (auto& t : cur.terms()) {
            Monomial rest;
            Polynomial factor(1);
            bool reduced = false;
            for (auto& [s, k] : t.m.e) {
                const Polynomial* sq = relation(s);
                if (sq != nullptr && k >= 2) {
                    if (k % 2 == 1) rest.e.emplace_back(s, 1);
                    factor *= sq->pow(k / 2);
                    reduced = true;
                } else if (sq != nullptr && k < 0) {
                    throw std::domain_error("reduce_relations: negative exponent on relational symbol");
                } else {
                    rest.e.emplace_back(s, k);
                }
            }
            if (reduced) {
                changed = true;
                Polynomial piece = factor.mul_term({rest, t.c});
                for (auto& u : piece.terms()) {
                    auto [it, fresh] = acc.emplace(u.m, u.c);
                    if (!fresh) it->second += u.c;
                }
            } else {
                auto [it, fresh] = acc.emplace(t.m, t.c);
                if (!fresh) it->second += t.c;
            }
        }
        cur = Polynomial::from_terms(std::move(acc));
        if (!changed) return cur;
        // loop again: relation right-hand sides may themselves contain
        // relational symbols with high exponents
    }
}

// Single-term polynomial c * m.
inline Polynomial monomial_poly(const Monomial& m, const GaussianRational& c) {
    Polynomial p(1);
    return p.mul_term({m, c});
}

// ---------------------------------------------------------------------------
// Exact division, content and gcd (needed for fraction normal forms and for
// fraction-free elimination).  These operate on ordinary polynomials; Laurent
// inputs are handled by callers stripping monomial content first.
// ---------------------------------------------------------------------------

// Exact division a / b; nullopt when not exactly divisible.
inline std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw std::domain_error("divide_exact: division by zero");
    if (a.is_zero()) return Polynomial{};
    if (b.is_constant()) return a * b.constant_value().inverse();
    Polynomial rem = a, quot;
    const auto& lead = b.leading();
    while (!rem.is_zero()) {
        auto q = Monomial::divide(rem.leading().m, lead.m);
        if (!q) return std::nullopt;
        GaussianRational c = rem.leading().c / lead.c;
        Polynomial t = monomial_poly(*q, c);
        quot += t;
        rem -= b.mul_term({*q, c});
    }
    return quot;
}

// Coefficients of p viewed as univariate in x (index = exponent, from
// min_exp up to degree); each coefficient is a polynomial in the rest.
inline std::vector<Polynomial> coefficients_in(const Polynomial& p, Symbol x, int& min_exp) {
    min_exp = p.min_exponent_in(x);
    int deg = p.degree_in(x);
    std::vector<Polynomial> cs(std::size_t(deg - min_exp + 1));
    for (auto& t : p.terms()) {
        int k = t.m.exponent(x);
        Monomial rest;
        for (auto& [s, e] : t.m.e)
            if (s != x) rest.e.emplace_back(s, e);
        cs[std::size_t(k - min_exp)] += monomial_poly(rest, t.c);
    }
    return cs;
}

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);  // fwd

// gcd of all coefficients of p in main variable x (the "content").
inline Polynomial content_in(const Polynomial& p, Symbol x) {
    int mn;
    auto cs = coefficients_in(p, x, mn);
    Polynomial g;
    for (auto& c : cs) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c : poly_gcd(g, c);
        if (g.is_constant()) break;
    }
    return g.is_zero() ? Polynomial(1) : g;
}

// Strip per-variable minimal exponents (monomial content), returning the
// stripped polynomial; records the removed monomial in `content`.
inline Polynomial strip_monomial_content(const Polynomial& p, Monomial& content) {
    content = Monomial{};
    if (p.is_zero()) return p;
    auto vars = p.variables();
    Monomial shift;
    for (Symbol v : vars) {
        int mn = p.min_exponent_in(v);
        if (mn != 0) shift.e.emplace_back(v, mn);
    }
    std::sort(shift.e.begin(), shift.e.end(),
              [](auto& a, auto& b) { return sym_cmp(a.first, b.first) < 0; });
    content = shift;
    if (shift.e.empty()) return p;
    Monomial inv = shift.pow(-1);
    return p.mul_term({inv, GaussianRational(1)});
}

// Primitive pseudo-remainder sequence gcd.  Result is primitive and monic-ish
// (leading coefficient normalised to 1 when constant-free).  Correct up to a
// unit, which is all fraction normalisation needs.
inline Polynomial poly_gcd(const Polynomial& a0, const Polynomial& b0) {
    if (a0.is_zero()) return b0;
    if (b0.is_zero()) return a0;
    Monomial ca, cb;
    Polynomial a = strip_monomial_content(a0, ca);
    Polynomial b = strip_monomial_content(b0, cb);
    // common monomial factor: per-variable min of the two contents
    Monomial cg;
    {
        std::size_t i = 0, j = 0;
        while (i < ca.e.size() && j < cb.e.size()) {
            int c = sym_cmp(ca.e[i].first, cb.e[j].first);
            if (c < 0) ++i;
            else if (c > 0) ++j;
            else {
                int k = std::min(ca.e[i].second, cb.e[j].second);
                // only meaningful when both non-negative or both negative;
                // use min toward zero to stay safe with Laurent input
                if (ca.e[i].second > 0 && cb.e[j].second > 0 && k > 0) cg.e.emplace_back(ca.e[i].first, k);
                ++i; ++j;
            }
        }
    }
    Polynomial unit_g = monomial_poly(cg, GaussianRational(1));
    if (a.is_constant() || b.is_constant()) return unit_g;
    // choose main variable: a variable appearing in both if possible
    auto va = a.variables();
    auto vb = b.variables();
    Symbol x = 0;
    bool found = false;
    for (Symbol s : va)
        if (std::find(vb.begin(), vb.end(), s) != vb.end()) {
            x = s;
            found = true;
            break;
        }
    if (!found) return unit_g;  // disjoint variable sets: gcd is the monomial part
    // the nested content recursion is exponential in the variable count; for
    // wide inputs of non-trivial size settle for the monomial gcd (callers
    // use the result only to cancel, so a partial gcd is sound)
    {
        std::vector<Symbol> all = va;
        for (Symbol s : vb)
            if (std::find(all.begin(), all.end(), s) == all.end()) all.push_back(s);
        if (all.size() > 3 && (a.terms().size() > 12 || b.terms().size() > 12)) return unit_g;
    }
    // coefficient-size guard: the primitive remainder sequence can blow up
    // the integer coefficients even for short polynomials, so give up on the
    // non-monomial part once the inputs carry very large integers
    auto max_bits = [](const Polynomial& p) {
        unsigned best = 0;
        for (const auto& t : p.terms()) {
            for (const Rational* r : {&t.c.re, &t.c.im}) {
                if (r->is_zero()) continue;
                unsigned b = (unsigned)boost::multiprecision::msb(
                    boost::multiprecision::abs(boost::multiprecision::numerator(*r)) +
                    boost::multiprecision::abs(boost::multiprecision::denominator(*r)));
                best = std::max(best, b);
            }
        }
        return best;
    };
    if (max_bits(a) > 4096 || max_bits(b) > 4096) return unit_g;
    if (a.terms().size() * b.terms().size() > 4096) return unit_g;
    const std::size_t term_cap = 16 * std::max(a.terms().size(), b.terms().size()) + 64;
    Polynomial cont_a = content_in(a, x), cont_b = content_in(b, x);
    auto pp = [&](const Polynomial& p, const Polynomial& cont) {
        auto q = divide_exact(p, cont);
        return q ? *q : p;
    };
    Polynomial pa = pp(a, cont_a), pb = pp(b, cont_b);
    Polynomial cont_g = poly_gcd(cont_a, cont_b);
    // primitive PRS on (pa, pb) in x
    Polynomial f = pa, g = pb;
    if (f.degree_in(x) < g.degree_in(x)) std::swap(f, g);
    while (true) {
        int dg = g.degree_in(x);
        if (dg == 0) {
            // gcd in x is trivial unless g divides f... primitive parts =>
            // a degree-0 primitive g means gcd (in x) is a content, already
            // captured by cont_g
            return cont_g * unit_g;
        }
        // pseudo-remainder of f by g
        int df = f.degree_in(x);
        if (df < dg) std::swap(f, g), std::swap(df, dg);
        int mnf, mng;
        auto fc = coefficients_in(f, x, mnf);
        auto gc = coefficients_in(g, x, mng);
        if (mnf < 0 || mng < 0) throw std::logic_error("poly_gcd: Laurent input not stripped");
        // lead coefficient of g in x
        Polynomial lg = gc.back();
        Polynomial r = f;
        // classic pseudo-division loop
        int steps = df - dg + 1;
        for (int it = 0; it < steps && !r.is_zero() && r.degree_in(x) >= dg; ++it) {
            int dr = r.degree_in(x);
            int mnr;
            auto rc = coefficients_in(r, x, mnr);
            Polynomial lr = rc.back();
            // r = lg*r - lr*x^{dr-dg}*g
            Monomial xm;
            if (dr - dg != 0) xm.e.emplace_back(x, dr - dg);
            r = lg * r - (lr * g).mul_term({xm, GaussianRational(1)});
            if (r.terms().size() > term_cap) return unit_g;  // runaway remainder
        }
        if (r.is_zero()) {
            // g (primitive part) is the gcd in x
            Polynomial pg = pp(g, content_in(g, x));
            return cont_g * pg * unit_g;
        }
        f = g;
        Monomial junk;
        Polynomial rp = strip_monomial_content(r, junk);
        g = pp(rp, content_in(rp, x));
        if (max_bits(g) > 8192) return unit_g;  // runaway coefficient growth
    }
}

}  // namespace supint
