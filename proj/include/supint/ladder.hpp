// SPDX-License-Identifier: Apache-2.0
//
// Laguerre-type eigenfunctions of the anisotropic oscillator with
// inverse-square barriers, the index raising/lowering operators D±, and the
// composite energy-preserving symmetry D⁺(pμ,x)^q ∘ D⁻(qμ,y)^p.
//
// Separated bound states have the gauge form
//   X_n = e^{-μ₁x²/2} x^{a₁+1/2} L_n^{a₁}(μ₁x²),
// so every object here acts on the polynomial payload L_n^{a}(μz²) while the
// shared gauge factor e^{-μz²/2} z^{a+1/2} is carried implicitly.  Laguerre
// parameters a₁, a₂, the base frequency μ and the eigenfunction indices stay
// symbolic; all identities are checked as exact rational-function equalities.

#pragma once

#include "supint/chart.hpp"
#include "supint/diffop.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace supint {

// Shared symbol environment for the two separated axes.
struct LadderContext {
    ContextPtr ctx;
    Symbol x = 0, y = 0;    // invertible coordinate generators
    Symbol mu = 0;          // base frequency μ (μ₁ = pμ, μ₂ = qμ)
    Symbol a1 = 0, a2 = 0;  // Laguerre parameters
    Symbol n = 0, m = 0;    // symbolic eigenfunction indices
};

inline LadderContext make_ladder_context() {
    LadderContext lc;
    lc.x = generator_symbol("x");
    lc.y = generator_symbol("y");
    auto chart = std::make_shared<Chart>("separated");
    auto ident = [](int which) {
        return [which](std::complex<double> a, std::complex<double> b) { return which == 0 ? a : b; };
    };
    chart->add_generator({lc.x, 0, Polynomial(1), std::nullopt, true, ident(0)});
    chart->add_generator({lc.y, 1, Polynomial(1), std::nullopt, true, ident(1)});
    lc.ctx = std::make_shared<const Context>(chart);
    lc.mu = param("mu");
    lc.a1 = param("a1");
    lc.a2 = param("a2");
    lc.n = param("n");
    lc.m = param("m");
    return lc;
}

// ---------------------------------------------------------------------------
// Associated Laguerre polynomials, symbolic in the parameter.
// ---------------------------------------------------------------------------
struct LaguerrePolynomial {
    int n = 0;
    Symbol a = 0;        // parameter (symbolic)
    ChartElement value;  // polynomial in the argument with coefficients in Q(i)[a]
};

// L_n^a evaluated at the given argument, built from the three-term recurrence
//   (k+1) L_{k+1} = (2k+1+a-z) L_k - (k+a) L_{k-1},  L_0 = 1, L_1 = 1+a-z.
inline LaguerrePolynomial laguerre(int n, Symbol a, const ChartElement& arg) {
    if (n < 0) throw std::invalid_argument("laguerre: negative degree");
    const ContextPtr& ctx = arg.context();
    ChartElement av = ChartElement::variable(ctx, a);
    ChartElement one = ChartElement::constant(ctx, GaussianRational(1));
    ChartElement prev = one;                 // L_0
    ChartElement cur = one + av - arg;       // L_1
    if (n == 0) return {0, a, prev};
    for (int k = 1; k < n; ++k) {
        ChartElement next =
            ((ChartElement::constant(ctx, GaussianRational(2 * k + 1)) + av - arg) * cur -
             (ChartElement::constant(ctx, GaussianRational(k)) + av) * prev) /
            ChartElement::constant(ctx, GaussianRational(k + 1));
        prev = cur;
        cur = next;
    }
    return {n, a, cur};
}

// ---------------------------------------------------------------------------
// Gauge-space eigenfunctions.
// ---------------------------------------------------------------------------
// ψ = e^{-freq z²/2} z^{a+1/2} payload(z²); the struct stores the payload and
// the gauge data (coordinate axis, frequency, Laguerre parameter, index).
struct GaugeFunction {
    ChartElement payload;
    int axis = 0;        // 0: x, 1: y
    ChartElement freq;   // frequency μ_axis in the gauge factor
    Symbol a = 0;        // Laguerre parameter of the gauge factor
    int index = 0;       // eigenfunction index (payload degree); -1 marks zero
};

namespace ladder_detail {

inline Symbol coord_symbol(const LadderContext& lc, int axis) { return axis == 0 ? lc.x : lc.y; }

// Logarithmic derivative of the gauge factor: σ = -μz + (a+1/2)/z.
inline ChartElement gauge_log_derivative(const LadderContext& lc, int axis,
                                         const ChartElement& freq, Symbol a) {
    ChartElement z = ChartElement::variable(lc.ctx, coord_symbol(lc, axis));
    ChartElement zinv = ChartElement::from_poly(lc.ctx, Polynomial::variable(coord_symbol(lc, axis), -1));
    ChartElement half = ChartElement::constant(lc.ctx, GaussianRational(Rational(1, 2)));
    return -(freq * z) + (ChartElement::variable(lc.ctx, a) + half) * zinv;
}

// A payload is admissible when it is polynomial in the coordinate with even
// powers only (functions of z²) and free of the other coordinate.
inline void check_gauge_space(const LadderContext& lc, const ChartElement& e, int axis) {
    if (!e.den().is_constant())
        throw std::domain_error("gauge payload left the polynomial space: " + e.str());
    Symbol z = coord_symbol(lc, axis), other = coord_symbol(lc, 1 - axis);
    for (auto& t : e.num().terms()) {
        int k = t.m.exponent(z);
        if (k < 0 || k % 2 != 0)
            throw std::domain_error("gauge payload has an odd or negative power: " + e.str());
        if (t.m.exponent(other) != 0)
            throw std::domain_error("gauge payload mixes the two axes: " + e.str());
    }
}

}  // namespace ladder_detail

// X_n (axis 0) or Y_m (axis 1) with the given frequency: payload L_n^a(freq z²).
inline GaugeFunction eigenfunction(const LadderContext& lc, int axis, int n,
                                   const ChartElement& freq) {
    Symbol a = axis == 0 ? lc.a1 : lc.a2;
    ChartElement z = ChartElement::variable(lc.ctx, ladder_detail::coord_symbol(lc, axis));
    GaugeFunction g;
    g.payload = laguerre(n, a, freq * z * z).value;
    g.axis = axis;
    g.freq = freq;
    g.a = a;
    g.index = n;
    return g;
}

// The raising/lowering operators conjugated into the gauge representation,
// acting on payloads Q(z²):
//   D^± = ∂² ∓ 2zμ∂ ∓ μ + μ²z² + (1/4 - a²)/z²   (on full eigenfunctions)
// becomes, with σ the gauge logarithmic derivative,
//   ∂² + (2σ ∓ 2zμ)∂ + (σ' + σ² ∓ 2zμσ ∓ μ + μ²z² + (1/4 - a²)/z²).
inline DiffOperator gauged_ladder_operator(const LadderContext& lc, int axis,
                                           const ChartElement& freq, int sign) {
    ChartElement z = ChartElement::variable(lc.ctx, ladder_detail::coord_symbol(lc, axis));
    ChartElement zinv2 =
        ChartElement::from_poly(lc.ctx, Polynomial::variable(ladder_detail::coord_symbol(lc, axis), -2));
    ChartElement a = ChartElement::variable(lc.ctx, axis == 0 ? lc.a1 : lc.a2);
    ChartElement sigma = ladder_detail::gauge_log_derivative(lc, axis, freq, axis == 0 ? lc.a1 : lc.a2);
    ChartElement quarter = ChartElement::constant(lc.ctx, GaussianRational(Rational(1, 4)));
    GaussianRational s(sign > 0 ? -2 : 2);
    ChartElement drift = (freq * z) * s;  // ∓2zμ
    ChartElement scalar = sigma.differentiate(axis) + sigma * sigma + drift * sigma +
                          (freq * GaussianRational(sign > 0 ? -1 : 1)) + freq * freq * z * z +
                          (quarter - a * a) * zinv2;
    DiffOperator d = DiffOperator::derivative(lc.ctx, axis, 2);
    d += DiffOperator::derivative(lc.ctx, axis, 1) * (sigma + sigma + drift);
    d += DiffOperator::multiplication(scalar);
    return d;
}

namespace ladder_detail {

inline GaugeFunction apply_ladder(const LadderContext& lc, const GaugeFunction& psi, int sign) {
    GaugeFunction out;
    out.axis = psi.axis;
    out.freq = psi.freq;
    out.a = psi.a;
    out.payload = apply(gauged_ladder_operator(lc, psi.axis, psi.freq, sign), psi.payload);
    check_gauge_space(lc, out.payload, psi.axis);
    out.index = psi.index + (sign > 0 ? 1 : -1);
    if (out.payload.is_zero()) out.index = -1;
    return out;
}

}  // namespace ladder_detail

// D⁺(μ₁): X_n ↦ -4μ₁(n+1) X_{n+1}, computed directly in the gauge space.
inline GaugeFunction apply_Dplus(const LadderContext& lc, const GaugeFunction& psi) {
    return ladder_detail::apply_ladder(lc, psi, +1);
}

// D⁻(μ₂): Y_m ↦ -4μ₂(m+a₂) Y_{m-1}; m = 0 annihilates up to the barrier term.
inline GaugeFunction apply_Dminus(const LadderContext& lc, const GaugeFunction& psi) {
    return ladder_detail::apply_ladder(lc, psi, -1);
}

// Gauge-conjugated separated Hamiltonian piece for one axis:
//   H_z = ∂² - μ²z² + (1/4 - a²)/z²  acting on ψ; on payloads it becomes
//   ∂² + 2σ∂ + (σ' + σ² - μ²z² + (1/4 - a²)/z²).
inline DiffOperator gauged_hamiltonian(const LadderContext& lc, int axis, const ChartElement& freq) {
    ChartElement z = ChartElement::variable(lc.ctx, ladder_detail::coord_symbol(lc, axis));
    ChartElement zinv2 =
        ChartElement::from_poly(lc.ctx, Polynomial::variable(ladder_detail::coord_symbol(lc, axis), -2));
    ChartElement a = ChartElement::variable(lc.ctx, axis == 0 ? lc.a1 : lc.a2);
    ChartElement sigma = ladder_detail::gauge_log_derivative(lc, axis, freq, axis == 0 ? lc.a1 : lc.a2);
    ChartElement quarter = ChartElement::constant(lc.ctx, GaussianRational(Rational(1, 4)));
    ChartElement scalar = sigma.differentiate(axis) + sigma * sigma - freq * freq * z * z +
                          (quarter - a * a) * zinv2;
    DiffOperator d = DiffOperator::derivative(lc.ctx, axis, 2);
    d += DiffOperator::derivative(lc.ctx, axis, 1) * (sigma + sigma);
    d += DiffOperator::multiplication(scalar);
    return d;
}

// Separation eigenvalue λ = -2μ(2n + a + 1) with symbolic index expression.
inline ChartElement separation_eigenvalue(const LadderContext& lc, const ChartElement& freq,
                                          const ChartElement& index, Symbol a) {
    ChartElement one = ChartElement::constant(lc.ctx, GaussianRational(1));
    return freq * GaussianRational(-2) *
           (index + index + ChartElement::variable(lc.ctx, a) + one);
}

// Total energy for μ₁ = pμ, μ₂ = qμ: the sum of the two separation
// eigenvalues, E = -2μ(2pn + 2qm + pa₁ + p + qa₂ + q).  The index shift
// n → n+q, m → m-p leaves pn + qm, and hence E, unchanged.
inline ChartElement total_energy(const LadderContext& lc, int p, int q, const ChartElement& n,
                                 const ChartElement& m) {
    ChartElement mu = ChartElement::variable(lc.ctx, lc.mu);
    ChartElement a1 = ChartElement::variable(lc.ctx, lc.a1);
    ChartElement a2 = ChartElement::variable(lc.ctx, lc.a2);
    ChartElement one = ChartElement::constant(lc.ctx, GaussianRational(1));
    return mu * GaussianRational(-2) *
           ((n + n + a1 + one) * GaussianRational(p) + (m + m + a2 + one) * GaussianRational(q));
}

// ---------------------------------------------------------------------------
// Composite symmetry D⁺(pμ,x)^q ∘ D⁻(qμ,y)^p.
// ---------------------------------------------------------------------------
// Index shift and scalar coefficient for symbolic indices, obtained by
// chaining the single-step eigen-relations
//   D⁺: factor -4μ₁(n+1), n → n+1;  D⁻: factor -4μ₂(m+a₂), m → m-1.
struct CompositeAction {
    int dn = 0, dm = 0;      // index shift (n → n+dn, m → m+dm)
    ChartElement coefficient;  // scalar factor, rational in μ, a₂ and the indices
};

inline CompositeAction composite_symmetry(const LadderContext& lc, int p, int q,
                                          const ChartElement& n, const ChartElement& m) {
    if (p <= 0 || q <= 0) throw std::invalid_argument("composite_symmetry: p, q must be positive");
    ChartElement mu = ChartElement::variable(lc.ctx, lc.mu);
    ChartElement a2 = ChartElement::variable(lc.ctx, lc.a2);
    ChartElement one = ChartElement::constant(lc.ctx, GaussianRational(1));
    ChartElement c = one;
    ChartElement ni = n;
    for (int j = 0; j < q; ++j) {            // q raising steps with μ₁ = pμ
        c = c * (mu * GaussianRational(-4 * p)) * (ni + one);
        ni = ni + one;
    }
    ChartElement mi = m;
    for (int j = 0; j < p; ++j) {            // p lowering steps with μ₂ = qμ
        c = c * (mu * GaussianRational(-4 * q)) * (mi + a2);
        mi = mi - one;
    }
    return {q, -p, c};
}

// The composite realized as a differential operator in the gauge
// representation (acting on payload products).
inline DiffOperator composite_operator(const LadderContext& lc, int p, int q) {
    ChartElement mu = ChartElement::variable(lc.ctx, lc.mu);
    DiffOperator dp = gauged_ladder_operator(lc, 0, mu * GaussianRational(p), +1);
    DiffOperator dm = gauged_ladder_operator(lc, 1, mu * GaussianRational(q), -1);
    DiffOperator r = DiffOperator::identity(lc.ctx);
    for (int j = 0; j < q; ++j) r = compose(r, dp);
    for (int j = 0; j < p; ++j) r = compose(r, dm);
    return r;
}

// Gauged two-axis Hamiltonian for the frequency pair (pμ, qμ).
inline DiffOperator gauged_total_hamiltonian(const LadderContext& lc, int p, int q) {
    ChartElement mu = ChartElement::variable(lc.ctx, lc.mu);
    return gauged_hamiltonian(lc, 0, mu * GaussianRational(p)) +
           gauged_hamiltonian(lc, 1, mu * GaussianRational(q));
}

}  // namespace supint
