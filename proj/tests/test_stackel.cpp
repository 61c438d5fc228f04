// SPDX-License-Identifier: Apache-2.0
//
// Coupling-constant / energy exchange between separable systems: spec
// transforms, symmetry transport, the deformed Kepler-Coulomb golden table
// at k = 2, and the caged oscillator on the two-sheet hyperboloid.
#include <catch2/catch_amalgamated.hpp>

#include "supint/diffop.hpp"
#include "supint/parser.hpp"
#include "supint/stackel.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <tuple>

using namespace supint;

namespace {

nlohmann::json load_golden(const char* name) {
    std::ifstream in(std::string(SUPINT_DATA_DIR) + "/" + name);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

std::string joined(const nlohmann::json& chunks) {
    std::string s;
    for (const auto& c : chunks) s += c.get<std::string>();
    return s;
}

// Parse environment on the radial/trigonometric chart with the symbols of the
// transformed (Kepler-Coulomb) system bound by name.
ParseEnv kepler_env(const CanonicalSystem& kep) {
    ParseEnv env;
    env.ctx = kep.ctx;
    for (const char* n : {"X", "S", "C"})
        env.names[n] = ChartElement::variable(kep.ctx, generator_symbol(n));
    for (const char* n : {"Hh", "E", "L2", "beta", "gamma"})
        env.names[n] = ChartElement::variable(kep.ctx, param(n));
    return env;
}

// E_{a,b,c} = X^a S^b C^c support of an expansion coefficient.
std::set<std::tuple<int, int, int>> trig_support(const ChartElement& e) {
    Symbol X = generator_symbol("X"), S = generator_symbol("S"), C = generator_symbol("C");
    REQUIRE(e.den() == Polynomial(1));
    std::set<std::tuple<int, int, int>> out;
    for (const auto& t : e.num().terms())
        out.insert({t.m.exponent(X), t.m.exponent(S), t.m.exponent(C)});
    return out;
}

// Coefficient of X^a S^b C^c, parameters kept.
ChartElement trig_cell(const ChartElement& e, int a, int b, int c) {
    Symbol X = generator_symbol("X"), S = generator_symbol("S"), C = generator_symbol("C");
    Polynomial out;
    for (const auto& t : e.num().terms()) {
        if (t.m.exponent(X) != a || t.m.exponent(S) != b || t.m.exponent(C) != c) continue;
        Monomial rest;
        for (const auto& [s, k] : t.m.e)
            if (s != X && s != S && s != C) rest.e.emplace_back(s, k);
        out = out + monomial_poly(rest, t.c);
    }
    return ChartElement::from_poly(e.context(), out);
}

}  // namespace

TEST_CASE("spec transform instances") {
    SECTION("TTW with multiplier e^{2R}") {
        StackelMap map = make_ttw_kepler_map(2, 1);
        Symbol X = generator_symbol("X");
        ChartElement Xe = ChartElement::variable(map.target.ctx, X);
        ChartElement Ee = ChartElement::variable(map.target.ctx, param("E"));
        CHECK((map.target.f1 - Xe * Xe).is_zero());
        CHECK(map.target.f2.is_zero());
        CHECK((map.target.v1 + Ee * Xe).is_zero());
        CHECK((map.target.v2 - map.source.v2).is_zero());
        CHECK(map.target.H == param("Hh"));
    }
    SECTION("caged oscillator with multiplier 1/u1^2") {
        StackelMap map = make_caged_hyperboloid_map(2, 2);
        const CanonicalSystem& hyp = map.target;
        ChartElement u1 = ChartElement::variable(hyp.ctx, map.source.u1);
        ChartElement expect_f1 =
            ChartElement::from_poly(hyp.ctx, Polynomial::variable(map.source.u1, -2));
        CHECK((hyp.f1 - expect_f1).is_zero());
        ChartElement w = ChartElement::variable(hyp.ctx, param("omega"));
        ChartElement Ee = ChartElement::variable(hyp.ctx, param("E"));
        ChartElement expect_v1 =
            w * w * ChartElement::constant(hyp.ctx, GaussianRational(4)) * u1 * u1 - Ee;
        CHECK((hyp.v1 - expect_v1).is_zero());
        CHECK((hyp.v2 - map.source.v2).is_zero());
    }
    SECTION("unit multiplier is the identity, zero multiplier is rejected") {
        CanonicalSystem caged = make_caged_system(2, 2);
        ChartElement one = ChartElement::constant(caged.ctx, GaussianRational(1));
        CanonicalSystem same = transform_spec(caged, one, param("alpha1"), param("E"), param("Hh"));
        CHECK((same.f1 - caged.f1).is_zero());
        CHECK((same.v1 - caged.v1).is_zero());
        CHECK(same.H == caged.H);
        CHECK_THROWS_AS(
            transform_spec(caged, ChartElement(caged.ctx), param("alpha1"), param("E"), param("Hh")),
            std::domain_error);
    }
}

TEST_CASE("deformed Kepler-Coulomb golden table at k = 2") {
    nlohmann::json j = load_golden("kepler_k2_golden.json");
    StackelMap map = make_ttw_kepler_map(j["p"].get<int>(), j["q"].get<int>());
    const CanonicalSystem& ttw = map.source;
    const CanonicalSystem& kep = map.target;
    ParseEnv env = kepler_env(kep);

    // Pinned F: the printed normalization A_{-2,1,0} = 32(L2-4), A_{-1,1,0}=0
    // has no exchanged symbols, so it reads the same on both sides.
    ChartElement F = parse_element(joined(j["A"]), env);
    {
        auto cell1 = j["normalization"]["cell1"];
        ChartElement v1 = parse_element(j["normalization"]["value1"].get<std::string>(), env);
        CHECK((trig_cell(F, cell1[0], cell1[1], cell1[2]) - v1).is_zero());
        auto cell2 = j["normalization"]["cell2"];
        CHECK(trig_cell(F, cell2[0], cell2[1], cell2[2]).is_zero());
    }

    // Solve the oscillator-side canonical equations for G and transport.
    ChartElement G = solve_symmetry_for_G(ttw, F, radial_trig_ansatz(ttw, -2));
    CHECK(verify_solution(ttw, F, G));
    auto [Fk, Gk] = transform_symmetry(map, F, G);
    CHECK(verify_solution(kep, Fk, Gk));

    SECTION("expansion supports match the printed nonzero cells") {
        std::set<std::tuple<int, int, int>> supA, supB;
        for (const auto& c : j["support_A"]) supA.emplace(c[0].get<int>(), c[1].get<int>(), c[2].get<int>());
        for (const auto& c : j["support_B"]) supB.emplace(c[0].get<int>(), c[1].get<int>(), c[2].get<int>());
        // the normalization sets the free cell A_{-1,1,0} to zero
        std::set<std::tuple<int, int, int>> gotA = trig_support(Fk);
        CHECK(gotA == std::set<std::tuple<int, int, int>>{{-2, 1, 0}});
        for (auto& cell : gotA) CHECK(supA.count(cell) == 1);
        CHECK(trig_support(Gk) == supB);
    }

    SECTION("operator coefficients reproduce the printed table term by term") {
        OperatorCoefficients oc = operator_coefficients(kep, Fk, Gk);
        CHECK((oc.A - parse_element(joined(j["A"]), env)).is_zero());
        CHECK((oc.B - parse_element(joined(j["B"]), env)).is_zero());
        CHECK((oc.C - parse_element(joined(j["C"]), env)).is_zero());
        CHECK((oc.D - parse_element(joined(j["D"]), env)).is_zero());
    }

    SECTION("the assembled printed operator is fifth order and commutes") {
        // assembled directly from the printed coefficients, independently of
        // the solver path
        OperatorCoefficients oc;
        oc.A = parse_element(joined(j["A"]), env);
        oc.B = parse_element(joined(j["B"]), env);
        oc.C = parse_element(joined(j["C"]), env);
        oc.D = parse_element(joined(j["D"]), env);
        DiffOperator Hop = hamiltonian_operator(kep);
        DiffOperator sym = assemble_symmetry(expand_blocks(kep, oc), Hop, l2_operator(kep));
        int order = 0;
        for (const auto& [k, c] : sym.terms()) order = std::max(order, k.first + k.second);
        CHECK(order == 5);
        CHECK(commutator(Hop, sym).is_zero());
        CHECK(!commutator(l2_operator(kep), sym).is_zero());
        // and it coincides with the operator built from the solved pair
        CHECK((sym - build_operator(kep, Fk, Gk)).is_zero());
    }

    SECTION("mutually inverse swaps compose to the identity") {
        CHECK((Fk.substitute(map.backward) - F).is_zero());
        CHECK((Gk.substitute(map.backward) - G).is_zero());
    }

    SECTION("unsolved input is rejected") {
        CHECK_THROWS_AS(transform_symmetry(map, F, F), std::domain_error);
    }
}

TEST_CASE("caged oscillator on the two-sheet hyperboloid") {
    for (auto [p, q] : {std::pair{2, 2}, std::pair{6, 4}}) {
        DYNAMIC_SECTION("frequency pair (" << p << "," << q << ")") {
            StackelMap map = make_caged_hyperboloid_map(p, q);
            const CanonicalSystem& caged = map.source;
            const CanonicalSystem& hyp = map.target;

            LatticeState st = lattice_march(caged);
            ChartElement t1 = st.corner_t2, t2 = -st.corner_t1;
            if (st.two_parameter) {
                t1 = ChartElement::constant(caged.ctx, GaussianRational(1));
                t2 = ChartElement(caged.ctx);
            }
            LatticeSolution sol = realize(caged, st, t1, t2);
            REQUIRE(verify_solution(caged, sol.F, sol.G));

            auto [Fh, Gh] = transform_symmetry(map, sol.F, sol.G);
            CHECK(verify_solution(hyp, Fh, Gh));

            DiffOperator Hop = hamiltonian_operator(hyp);
            DiffOperator sym = build_operator(hyp, Fh, Gh);
            CHECK(!sym.is_zero());
            CHECK(commutator(Hop, sym).is_zero());

            CHECK((Fh.substitute(map.backward) - sol.F).is_zero());
            CHECK((Gh.substitute(map.backward) - sol.G).is_zero());
        }
    }
}

TEST_CASE("hyperboloid potential through the Minkowski embedding") {
    // s0 = (1+u1^2+u2^2)/(2u1), s1 = (1-u1^2-u2^2)/(2u1), s2 = u2/u1 embeds
    // the transformed system as the upper sheet of s0^2 - s1^2 - s2^2 = 1;
    // its potential must match the printed s-coordinate expression.
    for (auto [p, q] : {std::pair{2, 2}, std::pair{6, 4}}) {
        StackelMap map = make_caged_hyperboloid_map(p, q);
        const CanonicalSystem& hyp = map.target;
        ChartElement u1 = ChartElement::variable(hyp.ctx, map.source.u1);
        ChartElement u2 = ChartElement::variable(hyp.ctx, map.source.u2);
        ChartElement one = ChartElement::constant(hyp.ctx, GaussianRational(1));
        ChartElement two = ChartElement::constant(hyp.ctx, GaussianRational(2));
        ChartElement s0 = (one + u1 * u1 + u2 * u2) / (two * u1);
        ChartElement s1 = (one - u1 * u1 - u2 * u2) / (two * u1);
        ChartElement s2 = u2 / u1;
        CHECK((s0 * s0 - s1 * s1 - s2 * s2 - one).is_zero());
        ChartElement E = ChartElement::variable(hyp.ctx, param("E"));
        ChartElement a2 = ChartElement::variable(hyp.ctx, param("alpha2"));
        ChartElement w = ChartElement::variable(hyp.ctx, param("omega"));
        ChartElement P2 = ChartElement::constant(hyp.ctx, GaussianRational(long(p) * p));
        ChartElement Q2 = ChartElement::constant(hyp.ctx, GaussianRational(long(q) * q));
        ChartElement Vtilde = a2 / s2.pow(2) - E / (s0 + s1).pow(2) +
                              w * w * (P2 - Q2) / (s0 + s1).pow(4) +
                              w * w * Q2 * (s0 - s1) / (s0 + s1).pow(3);
        ChartElement Vsys = (hyp.v1 + hyp.v2) / (hyp.f1 + hyp.f2);
        CHECK((Vtilde - Vsys).is_zero());
    }
}
