// SPDX-License-Identifier: Apache-2.0
//
// Differential operator algebra: Leibniz composition, associativity,
// commutator identities, and symmetry assembly from block templates.
#include <catch2/catch_amalgamated.hpp>

#include "supint/diffop.hpp"

#include <random>

using namespace supint;

namespace {

struct Fixture {
    Symbol x = generator_symbol("dx_x");
    Symbol y = generator_symbol("dx_y");
    ContextPtr ctx;

    Fixture() {
        auto chart = std::make_shared<Chart>("cartesian");
        chart->add_generator({x, 0, Polynomial(1), std::nullopt, true,
                              [](auto u1, auto) { return u1; }});
        chart->add_generator({y, 1, Polynomial(1), std::nullopt, true,
                              [](auto, auto u2) { return u2; }});
        ctx = std::make_shared<Context>(chart);
    }

    ChartElement el(Symbol s, int e = 1) const { return ChartElement::variable(ctx, s, e); }
    DiffOperator mul(ChartElement c) const { return DiffOperator::multiplication(std::move(c)); }
    DiffOperator d(int i, int o = 1) const { return DiffOperator::derivative(ctx, i, o); }

    DiffOperator random_op(std::mt19937& rng) const {
        std::uniform_int_distribution<long> coeff(-3, 3);
        std::uniform_int_distribution<int> expd(0, 2), ord(0, 2);
        DiffOperator op(ctx);
        for (int t = 0; t < 3; ++t) {
            ChartElement c = el(x, expd(rng)) * el(y, expd(rng)) * GaussianRational(coeff(rng));
            op.add({ord(rng), ord(rng)}, c);
        }
        return op;
    }
};

}  // namespace

TEST_CASE("basic composition relations") {
    Fixture f;
    // [d/dx, x] = 1
    DiffOperator c = commutator(f.d(0), f.mul(f.el(f.x)));
    CHECK(c == DiffOperator::identity(f.ctx));
    // [d/dx, y] = 0, [d/dx, d/dy] = 0
    CHECK(commutator(f.d(0), f.mul(f.el(f.y))).is_zero());
    CHECK(commutator(f.d(0), f.d(1)).is_zero());
    // d/dx ∘ x^2 = x^2 d/dx + 2x
    DiffOperator lhs = compose(f.d(0), f.mul(f.el(f.x, 2)));
    DiffOperator rhs = compose(f.mul(f.el(f.x, 2)), f.d(0)) + f.mul(f.el(f.x) * GaussianRational(2));
    CHECK(lhs == rhs);
}

TEST_CASE("composition is associative and distributes") {
    Fixture f;
    std::mt19937 rng(20260826);
    for (int iter = 0; iter < 10; ++iter) {
        DiffOperator a = f.random_op(rng), b = f.random_op(rng), c = f.random_op(rng);
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
        CHECK(compose(a, b + c) == compose(a, b) + compose(a, c));
    }
}

TEST_CASE("commutator identities") {
    Fixture f;
    std::mt19937 rng(99);
    for (int iter = 0; iter < 6; ++iter) {
        DiffOperator a = f.random_op(rng), b = f.random_op(rng), c = f.random_op(rng);
        CHECK(commutator(a, b) == -commutator(b, a));
        // Jacobi
        DiffOperator jac = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) +
                           commutator(c, commutator(a, b));
        CHECK(jac.is_zero());
        // derivation property: [a, bc] = [a,b]c + b[a,c]
        CHECK(commutator(a, compose(b, c)) ==
              compose(commutator(a, b), c) + compose(b, commutator(a, c)));
    }
}

TEST_CASE("higher-order Leibniz expansion is exact") {
    Fixture f;
    // d^3/dx^3 ∘ f for f = x^2 y: expand and apply to the constant function
    DiffOperator op = compose(f.d(0, 3), f.mul(f.el(f.x, 2) * f.el(f.y)));
    // the order-0 coefficient is d^3/dx^3 (x^2 y) = 0
    CHECK(op.coefficient_at({0, 0}).is_zero());
    // the order-1 coefficient is 3 * d^2/dx^2(x^2 y) = 6y
    CHECK(op.coefficient_at({1, 0}) == f.el(f.y) * GaussianRational(6));
    // the order-2 coefficient is 3 * d/dx(x^2 y) = 6xy
    CHECK(op.coefficient_at({2, 0}) == f.el(f.x) * f.el(f.y) * GaussianRational(6));
    CHECK(op.coefficient_at({3, 0}) == f.el(f.x, 2) * f.el(f.y));
}

TEST_CASE("oscillator symmetry operator commutes") {
    Fixture f;
    Symbol w = param("omega");
    ChartElement w2 = ChartElement::variable(f.ctx, w, 2);
    // H = d^2/dx^2 + d^2/dy^2 - omega^2(x^2+y^2) (equal frequencies)
    DiffOperator H = f.d(0, 2) + f.d(1, 2) -
                     f.mul((f.el(f.x, 2) + f.el(f.y, 2)) * w2);
    // L = x d/dy - y d/dx commutes with H
    DiffOperator L = compose(f.mul(f.el(f.x)), f.d(1)) - compose(f.mul(f.el(f.y)), f.d(0));
    CHECK(commutator(H, L).is_zero());
    // x d/dy alone does not
    CHECK(!commutator(H, compose(f.mul(f.el(f.x)), f.d(1))).is_zero());
}

TEST_CASE("symmetry assembly matches explicit composition") {
    Fixture f;
    Symbol w = param("omega");
    ChartElement w2 = ChartElement::variable(f.ctx, w, 2);
    DiffOperator H = f.d(0, 2) + f.d(1, 2) - f.mul((f.el(f.x, 2) + f.el(f.y, 2)) * w2);
    DiffOperator L2 = -(f.d(1, 2) - f.mul(f.el(f.y, 2) * w2));
    ChartElement zero(f.ctx);
    ChartElement one = ChartElement::constant(f.ctx, GaussianRational(1));
    std::vector<SymmetryBlock> blocks{
        {1, 0, f.el(f.x), zero, zero, f.el(f.y)},        // (x ∂1∂2 + y) ∘ H
        {0, 2, zero, f.el(f.y, 2), zero, zero},          // y^2 ∂1 ∘ L2^2
        {0, 0, zero, zero, one, f.el(f.x) * f.el(f.y)},  // ∂2 + xy
    };
    DiffOperator got = assemble_symmetry(blocks, H, L2);
    DiffOperator expect =
        compose(compose(f.mul(f.el(f.x)), compose(f.d(0), f.d(1))) + f.mul(f.el(f.y)), H) +
        compose(compose(f.mul(f.el(f.y, 2)), f.d(0)), compose(L2, L2)) + f.d(1) +
        f.mul(f.el(f.x) * f.el(f.y));
    CHECK(got == expect);
}
