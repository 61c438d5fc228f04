// SPDX-License-Identifier: Apache-2.0
//
// Coupling-constant / energy exchange between separable systems (the Stäckel
// transform), acting on canonical-equation data by pure symbol substitution:
// a distinguished multiplier potential U rescales the metric pieces and the
// coupling that enters v1 through U trades places with the formal energy.
// Two instances are assembled here:
//   * the deformed Kepler–Coulomb system obtained from the TTW oscillator
//     with U = e^{2R}, on the exponential/trigonometric chart
//     X = e^{2R}, S = sin(2k·theta), C = cos(2k·theta) for rational k = p/q;
//   * the caged oscillator on the two-sheet hyperboloid obtained from the
//     flat caged oscillator with U = 1/u1^2.
// A linear solver over the exponential/trigonometric chart produces the
// oscillator-side symmetry pair (F, G) that the substitution carries over.
#pragma once

#include "supint/lattice.hpp"

#include <array>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace supint {

struct RadialTrigSymbols {
    Symbol X = 0, S = 0, C = 0;
};

// Chart for the radial/angular systems with rational frequency k = p/q:
//   X = e^{2R}:          dX/dR     =  2X,
//   S = sin(2k theta):   dS/dtheta =  2k C,
//   C = cos(2k theta):   dC/dtheta = -2k S,   C^2 = 1 - S^2.
inline std::pair<ContextPtr, RadialTrigSymbols> make_radial_trig_context(int p, int q) {
    if (p <= 0 || q <= 0)
        throw std::invalid_argument("make_radial_trig_context: p, q must be positive");
    RadialTrigSymbols g;
    g.X = generator_symbol("X");
    g.S = generator_symbol("S");
    g.C = generator_symbol("C");
    GaussianRational twok{Rational(2 * long(p), long(q))};
    const double k2 = 2.0 * double(p) / double(q);
    auto mono = [](Symbol s, int k) {
        Monomial m;
        m.e.emplace_back(s, k);
        return m;
    };
    auto chart = std::make_shared<Chart>("radial-trig");
    chart->add_generator({g.X, 0, monomial_poly(mono(g.X, 1), GaussianRational(2)), std::nullopt,
                          true, [](std::complex<double> a, std::complex<double>) {
                              return std::exp(2.0 * a);
                          }});
    chart->add_generator({g.S, 1, monomial_poly(mono(g.C, 1), twok), std::nullopt, true,
                          [k2](std::complex<double>, std::complex<double> b) {
                              return std::sin(k2 * b);
                          }});
    chart->add_generator({g.C, 1, monomial_poly(mono(g.S, 1), -twok),
                          Polynomial(1) - Polynomial::variable(g.S, 2), false,
                          [k2](std::complex<double>, std::complex<double> b) {
                              return std::cos(k2 * b);
                          }});
    return {std::make_shared<const Context>(chart), g};
}

// The TTW oscillator in the canonical separable form:
//   f1 = e^{2R}, f2 = 0, v1 = alpha e^{4R},
//   v2 = beta/cos^2(k theta) + gamma/sin^2(k theta)
//      = (2(gamma+beta) + 2(gamma-beta) C) / S^2.
inline CanonicalSystem make_ttw_system(int p, int q) {
    CanonicalSystem sys;
    sys.p = p;
    sys.q = q;
    auto [ctx, g] = make_radial_trig_context(p, q);
    sys.ctx = ctx;
    sys.u1 = g.X;  // representative invertible generator per coordinate
    sys.u2 = g.S;
    sys.H = param("H");
    sys.L2 = param("L2");
    Symbol alpha = param("alpha"), beta = param("beta"), gamma = param("gamma");
    sys.parameters = {alpha, beta, gamma};
    auto poly = [&](Polynomial pl) { return ChartElement::from_poly(sys.ctx, std::move(pl)); };
    Polynomial S2 = Polynomial::variable(g.S, -2);
    sys.f1 = poly(Polynomial::variable(g.X));
    sys.f2 = poly(Polynomial(0));
    sys.v1 = poly(Polynomial::variable(alpha) * Polynomial::variable(g.X, 2));
    sys.v2 = poly((Polynomial::variable(gamma) + Polynomial::variable(beta)) * GaussianRational(2) * S2 +
                  (Polynomial::variable(gamma) - Polynomial::variable(beta)) * GaussianRational(2) *
                      Polynomial::variable(g.C) * S2);
    return sys;
}

// ---------------------------------------------------------------------------
// The transform.
// ---------------------------------------------------------------------------

// Target system for multiplier U (a function of u1) when the exchanged
// coupling enters v1 exactly as coupling * U * (f1 + f2):
//   f_i -> f_i U,   v1 -> v1 - coupling*U*(f1+f2) - energy*(f1+f2),
// with a fresh formal eigenvalue replacing the source one.  U = 1 exchanges
// an additive constant for the energy, which leaves the spec unchanged.
inline CanonicalSystem transform_spec(const CanonicalSystem& src, const ChartElement& U,
                                      Symbol coupling, Symbol energy, Symbol eigen) {
    if (U.is_zero()) throw std::domain_error("transform_spec: vanishing multiplier");
    if ((U - ChartElement::constant(src.ctx, GaussianRational(1))).is_zero()) return src;
    CanonicalSystem out = src;
    out.H = eigen;
    ChartElement metric = src.f1 + src.f2;
    out.f1 = src.f1 * U;
    out.f2 = src.f2 * U;
    ChartElement c = ChartElement::variable(src.ctx, coupling);
    ChartElement en = ChartElement::variable(src.ctx, energy);
    out.v1 = src.v1 - c * U * metric - en * metric;
    if (out.v1.num().depends_on(coupling) || out.v1.den().depends_on(coupling))
        throw std::domain_error("transform_spec: coupling does not enter v1 through the multiplier");
    out.parameters.clear();
    for (Symbol s : src.parameters)
        if (s != coupling) out.parameters.push_back(s);
    out.parameters.push_back(energy);
    return out;
}

// Symbol swap between a source system and its transform.  On solutions of
// the source canonical equations the forward map (coupling -> -eigen,
// source H -> energy) produces solutions of the target equations; the
// backward map is its inverse.
struct StackelMap {
    CanonicalSystem source;
    CanonicalSystem target;
    ChartElement multiplier;
    std::unordered_map<Symbol, ChartElement> forward;   // source symbols -> target elements
    std::unordered_map<Symbol, ChartElement> backward;  // target symbols -> source elements
};

inline StackelMap make_stackel_map(const CanonicalSystem& src, const ChartElement& U,
                                   Symbol coupling, Symbol energy, Symbol eigen) {
    StackelMap m;
    m.source = src;
    m.multiplier = U;
    m.target = transform_spec(src, U, coupling, energy, eigen);
    auto var = [&](Symbol s) { return ChartElement::variable(src.ctx, s); };
    m.forward[coupling] = -var(eigen);
    m.forward[src.H] = var(energy);
    m.backward[eigen] = -var(coupling);
    m.backward[energy] = var(src.H);
    return m;
}

// Carries a verified source symmetry pair to the target system.  Throws if
// the input does not solve the source canonical equations.
inline std::pair<ChartElement, ChartElement> transform_symmetry(const StackelMap& m,
                                                                const ChartElement& F,
                                                                const ChartElement& G) {
    auto [r1, r2] = canonical_residuals(m.source, F, G);
    if (!r1.is_zero() || !r2.is_zero())
        throw std::domain_error("transform_symmetry: source residuals are nonzero");
    return {F.substitute(m.forward), G.substitute(m.forward)};
}

// TTW with U = e^{2R}: the deformed Kepler-Coulomb system
//   f1 = e^{4R}, v1 = -E e^{2R}, eigenvalue Hh.
inline StackelMap make_ttw_kepler_map(int p, int q) {
    CanonicalSystem ttw = make_ttw_system(p, q);
    ChartElement U = ChartElement::variable(ttw.ctx, generator_symbol("X"));
    return make_stackel_map(ttw, U, param("alpha"), param("E"), param("Hh"));
}

// Caged oscillator with U = 1/u1^2: the oscillator on the two-sheet
// hyperboloid, f1 = 1/u1^2, v1 = omega^2 p^2 u1^2 - E, eigenvalue Hh.
// Expects an even frequency pair, as make_caged_system does.
inline StackelMap make_caged_hyperboloid_map(int p, int q) {
    CanonicalSystem caged = make_caged_system(p, q);
    ChartElement U = ChartElement::from_poly(caged.ctx, Polynomial::variable(caged.u1, -2));
    return make_stackel_map(caged, U, param("alpha1"), param("E"), param("Hh"));
}

// ---------------------------------------------------------------------------
// Linear solver for the canonical equations over a finite ansatz.
// ---------------------------------------------------------------------------

// Ansatz basis X^a tau P for the radial/angular systems: exponential levels
// a in [amin, 0], tau in {1, S, C}, parameter monomials of total degree <= 2
// in {alpha, H, beta, gamma} times L2 powers <= 2.  This covers the finite
// series support of the low-order symmetries.
inline std::vector<ChartElement> radial_trig_ansatz(const CanonicalSystem& sys, int amin) {
    Symbol X = generator_symbol("X"), S = generator_symbol("S"), C = generator_symbol("C");
    std::array<Symbol, 4> ps = {param("alpha"), sys.H, param("beta"), param("gamma")};
    auto mono = [](Symbol s, int k) {
        Monomial m;
        if (k != 0) m.e.emplace_back(s, k);
        return m;
    };
    std::vector<Monomial> pmono;
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; i + j <= 2; ++j)
            for (int l = 0; i + j + l <= 2; ++l)
                for (int k = 0; i + j + l + k <= 2; ++k)
                    for (int L = 0; L <= 2; ++L)
                        pmono.push_back(mono(ps[0], i) * mono(ps[1], j) * mono(ps[2], l) *
                                        mono(ps[3], k) * mono(sys.L2, L));
    std::vector<Monomial> trig = {Monomial{}, mono(S, 1), mono(C, 1)};
    std::vector<ChartElement> basis;
    basis.reserve(std::size_t(-amin + 1) * trig.size() * pmono.size());
    for (int a = amin; a <= 0; ++a)
        for (const Monomial& t : trig)
            for (const Monomial& pm : pmono)
                basis.push_back(ChartElement::from_poly(
                    sys.ctx, monomial_poly(mono(X, a) * t * pm, GaussianRational(1))));
    return basis;
}

// Solves the canonical residual equations for G, given F, over the span of
// `basis` with unknown rational coefficients.  The residuals are jointly
// linear in (F, G), so collecting the coefficient of every monomial yields a
// plain linear system over the Gaussian rationals; free coefficients (gauge
// constants) are set to zero and the result is re-verified exactly.
inline ChartElement solve_symmetry_for_G(const CanonicalSystem& sys, const ChartElement& F,
                                         const std::vector<ChartElement>& basis) {
    ChartElement zero(sys.ctx);
    struct Row {
        std::map<int, GaussianRational> a;
        GaussianRational rhs;
    };
    std::array<std::map<Monomial, Row, MonomialGreater>, 2> table;
    auto add = [&](int comp, const ChartElement& e, int col) {
        if (e.is_zero()) return;
        if (!(e.den() == Polynomial(1)))
            throw std::domain_error("solve_symmetry_for_G: residual has a denominator");
        for (const auto& t : e.num().terms()) {
            Row& r = table[comp][t.m];
            if (col < 0) {
                r.rhs = r.rhs - t.c;  // knowns move to the right-hand side
            } else {
                auto [it, fresh] = r.a.try_emplace(col, t.c);
                if (!fresh) it->second = it->second + t.c;
            }
        }
    };
    {
        auto [b1, b2] = canonical_residuals(sys, F, zero);
        add(0, b1, -1);
        add(1, b2, -1);
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        auto [r1, r2] = canonical_residuals(sys, zero, basis[i]);
        add(0, r1, int(i));
        add(1, r2, int(i));
    }
    // Incremental reduction to row-echelon form, pivots normalized to 1.
    std::map<int, Row> echelon;  // keyed by pivot column
    for (auto& tab : table) {
        for (auto& [m, row] : tab) {
            Row r = std::move(row);
            while (!r.a.empty()) {
                auto lead = r.a.begin();
                auto pv = echelon.find(lead->first);
                if (pv == echelon.end()) break;
                GaussianRational f = lead->second;
                r.a.erase(lead);
                for (const auto& [c, v] : pv->second.a) {
                    if (c == pv->first) continue;
                    auto [it, fresh] = r.a.try_emplace(c, -(f * v));
                    if (!fresh) {
                        it->second = it->second - f * v;
                        if (it->second.is_zero()) r.a.erase(it);
                    } else if (it->second.is_zero()) {
                        r.a.erase(it);
                    }
                }
                r.rhs = r.rhs - f * pv->second.rhs;
            }
            if (r.a.empty()) {
                if (!r.rhs.is_zero())
                    throw std::domain_error("solve_symmetry_for_G: inconsistent system (ansatz too small)");
                continue;
            }
            GaussianRational inv = r.a.begin()->second.inverse();
            for (auto& [c, v] : r.a) v = v * inv;
            r.rhs = r.rhs * inv;
            echelon.emplace(r.a.begin()->first, std::move(r));
        }
    }
    // Back substitution; free columns stay zero.
    std::map<int, GaussianRational> x;
    for (auto it = echelon.rbegin(); it != echelon.rend(); ++it) {
        GaussianRational v = it->second.rhs;
        for (const auto& [c, a] : it->second.a) {
            if (c == it->first) continue;
            auto xt = x.find(c);
            if (xt != x.end()) v = v - a * xt->second;
        }
        if (!v.is_zero()) x.emplace(it->first, v);
    }
    ChartElement G(sys.ctx);
    for (const auto& [c, v] : x) G += basis[std::size_t(c)] * ChartElement::constant(sys.ctx, v);
    auto [r1, r2] = canonical_residuals(sys, F, G);
    if (!r1.is_zero() || !r2.is_zero())
        throw std::logic_error("solve_symmetry_for_G: solution fails re-verification");
    return G;
}

}  // namespace supint
