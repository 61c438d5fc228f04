// SPDX-License-Identifier: Apache-2.0
//
// Construction and exact verification of higher-order classical constants of
// the motion from angle-variable data: multiple-angle expansion, radical
// clearing, substitution of the separation constants by their phase-space
// expressions, and the Poisson-bracket checks.
#pragma once

#include "supint/system.hpp"

namespace supint {

// Homogeneous multiple-angle expansion from single-angle numerators:
// with S = sinh(A)*R, C = cosh(A)*R and R^2 = rho constant, the numerators of
// sinh(mA), cosh(mA) over R^|m| are ((C+S)^|m| -/+ (C-S)^|m|)/2, with the
// sinh sign flipped for negative m.
struct AngleExpansion {
    PhaseExpression sinh_num, cosh_num;
};

inline AngleExpansion expand_multiple(const PhaseExpression& S, const PhaseExpression& C, int m) {
    int a = m < 0 ? -m : m;
    PhaseExpression plus = (C + S).pow(a);
    PhaseExpression minus = (C - S).pow(a);
    GaussianRational half(Rational(1, 2), Rational(0));
    AngleExpansion e;
    e.cosh_num = (plus + minus) * half;
    e.sinh_num = (plus - minus) * half;
    if (m < 0) e.sinh_num = -e.sinh_num;
    return e;
}

// Numerators of sinh(m*A1 + n*A2) and cosh(m*A1 + n*A2) over R1^|m| R2^|n|.
inline AngleExpansion expand_combination(const SystemSpec& spec, int m, int n) {
    AngleExpansion a = expand_multiple(spec.angle[0].sinh_num, spec.angle[0].cosh_num, m);
    AngleExpansion b = expand_multiple(spec.angle[1].sinh_num, spec.angle[1].cosh_num, n);
    AngleExpansion r;
    r.sinh_num = a.sinh_num * b.cosh_num + a.cosh_num * b.sinh_num;
    r.cosh_num = a.cosh_num * b.cosh_num + a.sinh_num * b.sinh_num;
    return r;
}

namespace detail {

// Radical parity (exponent mod 2) of each coefficient term; fails when the
// expression mixes parities for the same radical.
inline std::vector<Symbol> uniform_radical_parity(const PhaseExpression& e) {
    std::map<Symbol, int> parity;
    bool first = true;
    for (auto& [key, c] : e.terms()) {
        for (auto& t : c.num().terms()) {
            std::map<Symbol, int> p;
            for (auto& [s, k] : t.m.e)
                if (sym_kind(s) == SymKind::Radical) p[s] = ((k % 2) + 2) % 2;
            if (first) {
                parity = p;
                first = false;
            } else {
                // missing entries count as parity 0
                auto val = [](const std::map<Symbol, int>& m, Symbol s) {
                    auto it = m.find(s);
                    return it == m.end() ? 0 : it->second;
                };
                std::map<Symbol, int> all = parity;
                for (auto& [s, v] : p) all.emplace(s, 0);
                for (auto& [s, v] : all)
                    if (val(parity, s) != val(p, s))
                        throw std::runtime_error("mixed radical parity in constant of motion");
            }
        }
        if (!c.den().is_constant())
            for (auto& t : c.den().terms())
                for (auto& [s, k] : t.m.e)
                    if (sym_kind(s) == SymKind::Radical)
                        throw std::runtime_error("radical left in a denominator");
    }
    std::vector<Symbol> odd;
    for (auto& [s, v] : parity)
        if (v == 1) odd.push_back(s);
    return odd;
}

// Divide out the common Gaussian-rational content of all coefficients.
inline PhaseExpression normalize_scalar_content(const PhaseExpression& e) {
    // use the leading coefficient of the lowest momentum key as normaliser
    for (auto& [key, c] : e.terms()) {
        GaussianRational lead = c.num().leading().c;
        if (lead.is_zero()) continue;
        // keep results integral-looking: scale so that this coefficient is 1
        // in absolute rational content only when it is purely rational
        if (lead.im == 0) return e * GaussianRational(Rational(1) / lead.re, Rational(0));
        if (lead.re == 0) return e * GaussianRational(Rational(0), Rational(-1) / lead.im);
        return e;
    }
    return e;
}

}  // namespace detail

// Turn an angle-combination numerator into a genuine polynomial constant of
// the motion: clear radicals by multiplying with the (constant) odd radicals,
// then replace the separation symbols H, L2 by their phase-space expressions.
// The result is kept in cleared form num/den (den momentum-free) so that the
// subsequent bracket checks run over polynomial coefficients only.
inline ClearedPhase extract_polynomial_constant(const SystemSpec& spec,
                                                const PhaseExpression& numerator) {
    PhaseExpression X = numerator;
    for (Symbol s : detail::uniform_radical_parity(X))
        X = X * ChartElement::variable(spec.ctx, s);
    // after clearing, every radical exponent is even and has been reduced to
    // its defining polynomial; double-check
    for (auto& [key, c] : X.terms())
        for (auto& t : c.num().terms())
            for (auto& [s, k] : t.m.e)
                if (sym_kind(s) == SymKind::Radical)
                    throw std::logic_error("radical survived clearing");

    ClearedPhase xc = clear_denominators(X);
    ClearedPhase hc = clear_denominators(spec.hamiltonian);
    ClearedPhase lc = clear_denominators(spec.l2_phase);

    // maximal powers of the separation symbols fix the common denominator
    int amax = 0, bmax = 0;
    for (auto& [key, c] : xc.num.terms()) {
        for (auto& t : c.num().terms()) {
            int a = t.m.exponent(spec.H_sym), b = t.m.exponent(spec.L2_sym);
            if (a < 0 || b < 0) throw std::runtime_error("negative separation symbol power");
            amax = std::max(amax, a);
            bmax = std::max(bmax, b);
        }
        if (c.den().depends_on(spec.H_sym) || c.den().depends_on(spec.L2_sym))
            throw std::runtime_error("separation symbol in a denominator");
    }

    // memoised powers: phase-space numerators and scalar denominators
    std::vector<PhaseExpression> Hn{PhaseExpression::coefficient(
        ChartElement::constant(spec.ctx, GaussianRational(1)))};
    std::vector<PhaseExpression> Ln = Hn;
    std::vector<Polynomial> Hd{Polynomial(GaussianRational(1))}, Ld = Hd;
    while ((int)Hn.size() <= amax) Hn.push_back(Hn.back() * hc.num);
    while ((int)Ln.size() <= bmax) Ln.push_back(Ln.back() * lc.num);
    while ((int)Hd.size() <= amax) Hd.push_back(Hd.back() * hc.den);
    while ((int)Ld.size() <= bmax) Ld.push_back(Ld.back() * lc.den);

    PhaseExpression result(spec.ctx);
    for (auto& [key, c] : xc.num.terms()) {
        PhaseExpression base_key(spec.ctx);
        base_key.set(key, ChartElement::constant(spec.ctx, GaussianRational(1)));
        for (auto& t : c.num().terms()) {
            int a = 0, b = 0;
            Monomial rest;
            for (auto& [s, k] : t.m.e) {
                if (s == spec.H_sym) a = k;
                else if (s == spec.L2_sym) b = k;
                else rest.e.emplace_back(s, k);
            }
            Polynomial scalar =
                monomial_poly(rest, t.c) * Hd[std::size_t(amax - a)] * Ld[std::size_t(bmax - b)];
            result += base_key * Hn[std::size_t(a)] * Ln[std::size_t(b)] *
                      ChartElement::from_poly(spec.ctx, scalar);
        }
    }
    return {detail::normalize_scalar_content(result),
            xc.den * Hd[std::size_t(amax)] * Ld[std::size_t(bmax)]};
}

struct ClassicalVerification {
    SystemSpec spec;
    ClearedPhase constant;          // the constructed constant of the motion, num/den
    int momentum_order = 0;
    bool commutes_with_H = false;   // {K, H} == 0 exactly
    bool independent_of_L2 = false; // {K, L2} != 0 exactly
};

// Build the lower-order of the two angle-combination constants and verify it
// exactly against the Hamiltonian and the second-order symmetry.
inline ClassicalVerification verify_classical(const Catalog& catalog, const std::string& id,
                                              int p, int q) {
    ClassicalVerification out;
    out.spec = catalog.instantiate(id, p, q);
    AngleExpansion comb = expand_combination(out.spec, out.spec.m, out.spec.n);
    ClearedPhase Ks = extract_polynomial_constant(out.spec, comb.sinh_num);
    ClearedPhase Kc = extract_polynomial_constant(out.spec, comb.cosh_num);
    out.constant = Ks.num.momentum_degree() <= Kc.num.momentum_degree() ? Ks : Kc;
    out.momentum_order = out.constant.num.momentum_degree();
    out.commutes_with_H =
        poisson_bracket_vanishes(out.constant, clear_denominators(out.spec.hamiltonian));
    out.independent_of_L2 =
        !poisson_bracket_vanishes(out.constant, clear_denominators(out.spec.l2_phase));
    return out;
}

}  // namespace supint
