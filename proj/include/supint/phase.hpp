// SPDX-License-Identifier: Apache-2.0
//
// Phase-space expressions: polynomials in the two momenta with chart-element
// coefficients.  Provides the Poisson bracket and the separation substitution
// p_i^2 -> (momentum-free expression in H, L2, coordinates) used to decide
// exact conservation on the energy/angular-momentum shell.
#pragma once

#include "supint/chart.hpp"

#include <map>
#include <utility>

namespace supint {

class PhaseExpression {
public:
    using Key = std::pair<int, int>;  // (p1 exponent, p2 exponent), both >= 0

    PhaseExpression() = default;
    explicit PhaseExpression(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static PhaseExpression coefficient(ChartElement c) {
        PhaseExpression e(c.context());
        e.set({0, 0}, std::move(c));
        return e;
    }
    static PhaseExpression momentum(ContextPtr ctx, int which, int exp = 1) {
        PhaseExpression e(ctx);
        Key k = which == 0 ? Key{exp, 0} : Key{0, exp};
        e.set(k, ChartElement::constant(std::move(ctx), GaussianRational(1)));
        return e;
    }

    const ContextPtr& context() const { return ctx_; }
    const std::map<Key, ChartElement>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int momentum_degree() const {
        int d = 0;
        for (auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
        return d;
    }
    ChartElement coefficient_at(Key k) const {
        auto it = terms_.find(k);
        if (it != terms_.end()) return it->second;
        return ChartElement(ctx_);
    }

    void set(Key k, ChartElement c) {
        if (c.is_zero()) terms_.erase(k);
        else terms_.insert_or_assign(k, std::move(c));
    }
    void add(Key k, const ChartElement& c) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(k, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    friend PhaseExpression operator+(const PhaseExpression& a, const PhaseExpression& b) {
        PhaseExpression r = a;
        if (r.ctx_ == nullptr) r.ctx_ = b.ctx_;
        for (auto& [k, c] : b.terms_) r.add(k, c);
        return r;
    }
    friend PhaseExpression operator-(const PhaseExpression& a) {
        PhaseExpression r = a;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }
    friend PhaseExpression operator-(const PhaseExpression& a, const PhaseExpression& b) {
        return a + (-b);
    }
    friend PhaseExpression operator*(const PhaseExpression& a, const PhaseExpression& b) {
        PhaseExpression r(a.ctx_ ? a.ctx_ : b.ctx_);
        for (auto& [ka, ca] : a.terms_)
            for (auto& [kb, cb] : b.terms_)
                r.add({ka.first + kb.first, ka.second + kb.second}, ca * cb);
        return r;
    }
    friend PhaseExpression operator*(const PhaseExpression& a, const ChartElement& c) {
        PhaseExpression r(a.ctx_);
        for (auto& [k, v] : a.terms_) r.add(k, v * c);
        return r;
    }
    friend PhaseExpression operator*(const PhaseExpression& a, const GaussianRational& c) {
        PhaseExpression r(a.ctx_);
        for (auto& [k, v] : a.terms_) r.add(k, v * c);
        return r;
    }
    PhaseExpression& operator+=(const PhaseExpression& b) { *this = *this + b; return *this; }
    PhaseExpression& operator-=(const PhaseExpression& b) { *this = *this - b; return *this; }
    PhaseExpression& operator*=(const PhaseExpression& b) { *this = *this * b; return *this; }

    friend bool operator==(const PhaseExpression& a, const PhaseExpression& b) {
        return (a - b).is_zero();
    }
    friend bool operator!=(const PhaseExpression& a, const PhaseExpression& b) { return !(a == b); }

    PhaseExpression pow(int k) const {
        if (k < 0) throw std::domain_error("PhaseExpression::pow: negative exponent");
        PhaseExpression acc = coefficient(ChartElement::constant(ctx_, GaussianRational(1)));
        PhaseExpression base = *this;
        while (k > 0) {
            if (k & 1) acc *= base;
            base *= base;
            k >>= 1;
        }
        return acc;
    }

    // d/du_i (coefficients only) and d/dp_i (momentum polynomial structure)
    PhaseExpression d_coord(int i) const {
        PhaseExpression r(ctx_);
        for (auto& [k, c] : terms_) r.add(k, c.differentiate(i));
        return r;
    }
    PhaseExpression d_momentum(int i) const {
        PhaseExpression r(ctx_);
        for (auto& [k, c] : terms_) {
            int e = i == 0 ? k.first : k.second;
            if (e == 0) continue;
            Key down = i == 0 ? Key{k.first - 1, k.second} : Key{k.first, k.second - 1};
            r.add(down, c * GaussianRational(e));
        }
        return r;
    }

    // Substitute p_i^2 -> subs[i] (momentum-free), leaving exponents in {0,1}.
    PhaseExpression reduce_momenta(const ChartElement& p1sq, const ChartElement& p2sq) const {
        PhaseExpression r(ctx_);
        for (auto& [k, c] : terms_) {
            ChartElement v = c;
            if (k.first >= 2) v *= p1sq.pow(k.first / 2);
            if (k.second >= 2) v *= p2sq.pow(k.second / 2);
            r.add({k.first % 2, k.second % 2}, v);
        }
        return r;
    }

    // Substitute parameter symbols by chart elements in every coefficient.
    PhaseExpression substitute(const std::unordered_map<Symbol, ChartElement>& map) const {
        PhaseExpression r(ctx_);
        for (auto& [k, c] : terms_) r.add(k, c.substitute(map));
        return r;
    }

    std::complex<double> evaluate(const std::function<std::complex<double>(Symbol)>& val,
                                  std::complex<double> p1, std::complex<double> p2) const {
        std::complex<double> acc = 0.0;
        for (auto& [k, c] : terms_)
            acc += c.evaluate(val) * std::pow(p1, k.first) * std::pow(p2, k.second);
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto& [k, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += "(" + c.str() + ")";
            if (k.first != 0) out += "*p1" + (k.first == 1 ? "" : "^" + std::to_string(k.first));
            if (k.second != 0) out += "*p2" + (k.second == 1 ? "" : "^" + std::to_string(k.second));
        }
        return out;
    }

private:
    ContextPtr ctx_;
    std::map<Key, ChartElement> terms_;
};

// Canonical Poisson bracket {a,b} = sum_i (da/du_i db/dp_i - da/dp_i db/du_i).
inline PhaseExpression poisson_bracket(const PhaseExpression& a, const PhaseExpression& b) {
    PhaseExpression r(a.context());
    for (int i = 0; i < 2; ++i)
        r += a.d_coord(i) * b.d_momentum(i) - a.d_momentum(i) * b.d_coord(i);
    return r;
}

// Common-denominator split e = num / den with a momentum-free denominator.
// Keeping numerator and denominator apart lets bracket checks run entirely
// over polynomial coefficients, which is far cheaper than rational-function
// arithmetic on large expressions.
struct ClearedPhase {
    PhaseExpression num;
    Polynomial den;
};

inline ClearedPhase clear_denominators(const PhaseExpression& e) {
    Polynomial D{GaussianRational(1)};
    for (auto& [k, c] : e.terms())
        if (!divide_exact(D, c.den())) D = D * c.den();
    ClearedPhase r{PhaseExpression(e.context()), D};
    for (auto& [k, c] : e.terms()) {
        auto q = divide_exact(D, c.den());
        if (!q) throw std::logic_error("clear_denominators: denominator does not divide");
        r.num.set(k, ChartElement::from_poly(e.context(), c.num() * *q));
    }
    return r;
}

// Exact test of {a, b} == 0 performed on cleared forms: with a = N/D and
// b = Wn/Wd (D, Wd momentum-free), the bracket vanishes iff
//   ({N,Wn} D - N {D,Wn}) Wd - ({N,Wd} D - N {D,Wd}) Wn == 0.
inline bool poisson_bracket_vanishes(const ClearedPhase& a, const ClearedPhase& b) {
    PhaseExpression D = PhaseExpression::coefficient(ChartElement::from_poly(a.num.context(), a.den));
    PhaseExpression Wd = PhaseExpression::coefficient(ChartElement::from_poly(a.num.context(), b.den));
    PhaseExpression lhs = (poisson_bracket(a.num, b.num) * D - a.num * poisson_bracket(D, b.num)) * Wd -
                          (poisson_bracket(a.num, Wd) * D - a.num * poisson_bracket(D, Wd)) * b.num;
    return lhs.is_zero();
}

}  // namespace supint
