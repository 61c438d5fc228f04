// SPDX-License-Identifier: Apache-2.0
//
// Poisson bracket properties: canonical pairs, antisymmetry, Leibniz, Jacobi.
#include <catch2/catch_amalgamated.hpp>

#include "supint/phase.hpp"

#include <random>

using namespace supint;

namespace {

struct Fixture {
    Symbol x = generator_symbol("qx");
    Symbol y = generator_symbol("qy");
    ContextPtr ctx;

    Fixture() {
        auto chart = std::make_shared<Chart>("cartesian");
        chart->add_generator({x, 0, Polynomial(1), std::nullopt, true,
                              [](auto u1, auto) { return u1; }});
        chart->add_generator({y, 1, Polynomial(1), std::nullopt, true,
                              [](auto, auto u2) { return u2; }});
        ctx = std::make_shared<Context>(chart);
    }

    PhaseExpression coord(Symbol s) const {
        return PhaseExpression::coefficient(ChartElement::variable(ctx, s));
    }
    PhaseExpression mom(int i) const { return PhaseExpression::momentum(ctx, i); }

    PhaseExpression random_expr(std::mt19937& rng) const {
        std::uniform_int_distribution<long> coeff(-4, 4);
        std::uniform_int_distribution<int> expd(0, 2);
        PhaseExpression e(ctx);
        for (int t = 0; t < 4; ++t) {
            PhaseExpression term = PhaseExpression::coefficient(
                ChartElement::constant(ctx, GaussianRational(coeff(rng))));
            term *= coord(x).pow(expd(rng)) * coord(y).pow(expd(rng));
            term *= mom(0).pow(expd(rng)) * mom(1).pow(expd(rng));
            e += term;
        }
        return e;
    }
};

}  // namespace

TEST_CASE("canonical pairs") {
    Fixture f;
    CHECK(poisson_bracket(f.coord(f.x), f.mom(0)) ==
          PhaseExpression::coefficient(ChartElement::constant(f.ctx, GaussianRational(1))));
    CHECK(poisson_bracket(f.coord(f.x), f.mom(1)).is_zero());
    CHECK(poisson_bracket(f.coord(f.x), f.coord(f.y)).is_zero());
    CHECK(poisson_bracket(f.mom(0), f.mom(1)).is_zero());
}

TEST_CASE("bracket is antisymmetric, bilinear and a derivation") {
    Fixture f;
    std::mt19937 rng(20260826);
    for (int iter = 0; iter < 15; ++iter) {
        PhaseExpression a = f.random_expr(rng), b = f.random_expr(rng), c = f.random_expr(rng);
        CHECK(poisson_bracket(a, b) == -poisson_bracket(b, a));
        CHECK(poisson_bracket(a + b, c) == poisson_bracket(a, c) + poisson_bracket(b, c));
        CHECK(poisson_bracket(a, b * c) ==
              poisson_bracket(a, b) * c + b * poisson_bracket(a, c));
    }
}

TEST_CASE("bracket satisfies the Jacobi identity") {
    Fixture f;
    std::mt19937 rng(777);
    for (int iter = 0; iter < 8; ++iter) {
        PhaseExpression a = f.random_expr(rng), b = f.random_expr(rng), c = f.random_expr(rng);
        PhaseExpression jac = poisson_bracket(a, poisson_bracket(b, c)) +
                              poisson_bracket(b, poisson_bracket(c, a)) +
                              poisson_bracket(c, poisson_bracket(a, b));
        CHECK(jac.is_zero());
    }
}

TEST_CASE("oscillator conservation, exactly") {
    Fixture f;
    Symbol w = param("omega");
    ChartElement w2 = ChartElement::variable(f.ctx, w, 2);
    // H = p1^2 + p2^2 + omega^2 (qx^2 + qy^2)
    PhaseExpression H = f.mom(0).pow(2) + f.mom(1).pow(2) +
                        (f.coord(f.x).pow(2) + f.coord(f.y).pow(2)) * w2;
    // angular momentum is not conserved unless frequencies match — here they do
    PhaseExpression L = f.coord(f.x) * f.mom(1) - f.coord(f.y) * f.mom(0);
    CHECK(poisson_bracket(H, L).is_zero());
    // the partial energy p1^2 + omega^2 qx^2 is conserved too (separable),
    // but qx p2 is not
    PhaseExpression E1 = f.mom(0).pow(2) + f.coord(f.x).pow(2) * w2;
    CHECK(poisson_bracket(H, E1).is_zero());
    CHECK(!poisson_bracket(H, f.coord(f.x) * f.mom(1)).is_zero());
}

TEST_CASE("momentum-square reduction respects the shell") {
    Fixture f;
    Symbol Hs = param("H"), Ls = param("L2");
    // p1^2 = L2 - qx^2, p2^2 = H - L2 - qy^2 (cartesian separation pattern)
    ChartElement p1sq = ChartElement::variable(f.ctx, Ls) -
                        ChartElement::variable(f.ctx, f.x, 2);
    ChartElement p2sq = ChartElement::variable(f.ctx, Hs) - ChartElement::variable(f.ctx, Ls) -
                        ChartElement::variable(f.ctx, f.y, 2);
    PhaseExpression H = f.mom(0).pow(2) + f.mom(1).pow(2) + f.coord(f.x).pow(2) +
                        f.coord(f.y).pow(2);
    PhaseExpression r = H.reduce_momenta(p1sq, p2sq);
    // on the shell the Hamiltonian collapses to the parameter H
    CHECK(r == PhaseExpression::coefficient(ChartElement::variable(f.ctx, Hs)));
    CHECK(r.momentum_degree() == 0);
    // reduction is multiplicative on even powers
    PhaseExpression p14 = f.mom(0).pow(4);
    CHECK(p14.reduce_momenta(p1sq, p2sq) ==
          PhaseExpression::coefficient(p1sq * p1sq));
    // odd powers keep one factor
    PhaseExpression p13 = f.mom(0).pow(3);
    CHECK(p13.reduce_momenta(p1sq, p2sq) == f.mom(0) * p1sq);
}
