// SPDX-License-Identifier: Apache-2.0
//
// Catalog of separable systems.  Records are loaded from data/catalog.json
// and instantiated at a rational frequency ratio k = p/q, producing a chart,
// the Hamiltonian and second-order symmetry as phase expressions, the
// separation substitutions p_i^2 -> (H, L2, coordinates), and the per-half
// angle data (numerators of sinh/cosh of the angle variable together with
// the engine-computed square rho of the common denominator).
#pragma once

#include "supint/parser.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <numeric>
#include <string>
#include <vector>

namespace supint {

using json = nlohmann::json;

// Extract the polynomial from a chart element, failing if it has a
// non-constant denominator.
inline Polynomial to_polynomial(const ChartElement& e) {
    if (!e.is_polynomial())
        throw std::runtime_error("expected polynomial expression, got " + e.str());
    GaussianRational d = e.den().constant_value();
    return d.is_one() ? e.num() : e.num() * d.inverse();
}

struct AngleData {
    PhaseExpression sinh_num;   // numerator of sinh(angle)
    PhaseExpression cosh_num;   // numerator of cosh(angle)
    Symbol radical = 0;         // R_i with R_i^2 = rho
    Polynomial rho;             // cosh^2 - sinh^2 on the separation shell
    ChartElement frequency;     // angle advance per unit of conformal time
};

struct SystemSpec {
    std::string id;
    int p = 1, q = 1;
    GaussianRational k;  // p/q
    ContextPtr ctx;

    Symbol H_sym = 0, L2_sym = 0, R0 = 0;
    std::vector<Symbol> parameters;  // potential parameters (omega, alpha, ...)

    int eps1 = 1, eps2 = 1, sigma1 = 1;
    ChartElement fsum, g1, v1, v2;
    ChartElement p1sq, p2sq;  // separation substitutions for p_i^2

    PhaseExpression hamiltonian;
    PhaseExpression l2_phase;

    AngleData angle[2];
    int m = 0, n = 0;  // integer angle combination with m*freq1 + n*freq2 = 0

    // Separation-shell reduction of a phase expression.
    PhaseExpression reduce(const PhaseExpression& e) const {
        return e.reduce_momenta(p1sq, p2sq);
    }
};

namespace detail {

// If a == r * b with a momentum-free factor r, return r.
inline std::optional<ChartElement> phase_ratio(const PhaseExpression& a, const PhaseExpression& b) {
    if (b.is_zero()) return std::nullopt;
    auto& [key, c] = *b.terms().begin();
    ChartElement r = a.coefficient_at(key) / c;
    if ((a - b * r).is_zero()) return r;
    return std::nullopt;
}

// A chart element is "parameter-only" when it involves no chart generators.
inline bool parameter_only(const ChartElement& e, const Chart& chart) {
    for (auto* poly : {&e.num(), &e.den()})
        for (auto& t : poly->terms())
            for (auto& [s, k] : t.m.e)
                if (chart.has(s)) return false;
    return true;
}

}  // namespace detail

class Catalog {
public:
    explicit Catalog(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open catalog: " + path);
        in >> doc_;
    }

    std::vector<std::string> ids() const {
        std::vector<std::string> v;
        for (auto& rec : doc_.at("systems")) v.push_back(rec.at("id").get<std::string>());
        return v;
    }

    const json& record(const std::string& id) const {
        for (auto& rec : doc_.at("systems"))
            if (rec.at("id").get<std::string>() == id) return rec;
        throw std::runtime_error("unknown system id: " + id);
    }

    // Instantiate a classical system at frequency ratio p/q (coprime).
    SystemSpec instantiate(const std::string& id, int p, int q) const;

private:
    // Build the chart described by `rec` and a parse environment over `ctx`.
    struct ChartBuild {
        std::shared_ptr<Chart> chart;
        std::vector<Symbol> gens;
    };
    ChartBuild build_chart(const json& rec, int p, int q) const;

    json doc_;
};

inline Catalog::ChartBuild Catalog::build_chart(const json& rec, int p, int q) const {
    std::unordered_map<std::string, GaussianRational> scalars{
        {"p", GaussianRational(p)},
        {"q", GaussianRational(q)},
        {"k", GaussianRational(Rational(p, q), Rational(0))}};

    // Pass 1: intern generator symbols and parse rule expressions over a
    // bootstrap chart that knows the symbols but no rules yet.
    auto boot = std::make_shared<Chart>("bootstrap");
    std::vector<Symbol> gens;
    for (auto& g : rec.at("generators")) {
        Symbol s = generator_symbol(g.at("name").get<std::string>());
        gens.push_back(s);
        boot->add_generator({s, g.at("coord").get<int>(), Polynomial{}, std::nullopt, true, {}});
    }
    ParseEnv benv;
    benv.ctx = std::make_shared<Context>(boot);
    for (Symbol s : gens) benv.bind(sym_name(s), ChartElement::variable(benv.ctx, s));
    benv.scalars = scalars;

    // Pass 2: build the real chart with parsed derivative/square rules and
    // numeric evaluators.
    auto chart = std::make_shared<Chart>(rec.at("id").get<std::string>());
    std::size_t idx = 0;
    for (auto& g : rec.at("generators")) {
        GeneratorRule rule;
        rule.sym = gens[idx++];
        rule.coord = g.at("coord").get<int>();
        rule.derivative = to_polynomial(parse_element(g.at("derivative").get<std::string>(), benv));
        if (g.contains("square"))
            rule.square = to_polynomial(parse_element(g.at("square").get<std::string>(), benv));
        rule.invertible = g.value("invertible", false);
        rule.eval = parse_numeric(g.at("numeric").get<std::string>(), scalars);
        chart->add_generator(std::move(rule));
    }
    return {chart, gens};
}

inline SystemSpec Catalog::instantiate(const std::string& id, int p, int q) const {
    if (p <= 0 || q <= 0 || std::gcd(p, q) != 1)
        throw std::runtime_error("system instantiation requires coprime positive p, q");
    const json& rec = record(id);
    ChartBuild cb = build_chart(rec, p, q);

    SystemSpec spec;
    spec.id = id;
    spec.p = p;
    spec.q = q;
    spec.k = GaussianRational(Rational(p, q), Rational(0));
    spec.H_sym = param("H");
    spec.L2_sym = param("L2");
    spec.R0 = radical_symbol("R0");
    for (auto& name : rec.at("parameters"))
        spec.parameters.push_back(param(name.get<std::string>()));

    // First context: chart + R0 (rho_1, rho_2 are not known yet).
    RadicalExtension ext0;
    ext0.radicals.emplace_back(spec.R0, Polynomial::variable(spec.L2_sym));

    // The angle radicals R1, R2 are added once rho is computed; build the
    // final context in two rounds, re-parsing over the final one.
    auto parse_round = [&](const RadicalExtension& ext, SystemSpec& out) {
        out.ctx = std::make_shared<Context>(cb.chart, ext);
        ParseEnv env;
        env.ctx = out.ctx;
        for (Symbol s : cb.gens) env.bind(sym_name(s), ChartElement::variable(out.ctx, s));
        for (Symbol s : out.parameters) env.bind(sym_name(s), ChartElement::variable(out.ctx, s));
        env.bind("H", ChartElement::variable(out.ctx, out.H_sym));
        env.bind("L2", ChartElement::variable(out.ctx, out.L2_sym));
        env.bind("R0", ChartElement::variable(out.ctx, out.R0));
        env.bind_scalar("p", GaussianRational(out.p));
        env.bind_scalar("q", GaussianRational(out.q));
        env.bind_scalar("k", out.k);

        out.eps1 = rec.at("eps")[0].get<int>();
        out.eps2 = rec.at("eps")[1].get<int>();
        out.sigma1 = rec.at("sigma1").get<int>();
        out.fsum = parse_element(rec.at("fsum").get<std::string>(), env);
        out.g1 = parse_element(rec.at("g1").get<std::string>(), env);
        out.v1 = parse_element(rec.at("v1").get<std::string>(), env);
        out.v2 = parse_element(rec.at("v2").get<std::string>(), env);

        ChartElement Hc = ChartElement::variable(out.ctx, out.H_sym);
        ChartElement Lc = ChartElement::variable(out.ctx, out.L2_sym);
        GaussianRational e1((long)out.eps1), e2((long)out.eps2), s1((long)out.sigma1);
        out.p1sq = (out.g1 * Hc + Lc * s1 - out.v1) * e1;
        out.p2sq = ((out.fsum - out.g1) * Hc - Lc * s1 - out.v2) * e2;

        PhaseExpression m1 = PhaseExpression::momentum(out.ctx, 0);
        PhaseExpression m2 = PhaseExpression::momentum(out.ctx, 1);
        PhaseExpression top = m1 * m1 * e1 + m2 * m2 * e2 +
                              PhaseExpression::coefficient(out.v1 + out.v2);
        ChartElement inv_f =
            ChartElement::constant(out.ctx, GaussianRational(1)) / out.fsum;
        out.hamiltonian = top * inv_f;
        out.l2_phase = (m1 * m1 * e1 + PhaseExpression::coefficient(out.v1) -
                        out.hamiltonian * out.g1) * s1;

        for (int part = 0; part < 2; ++part) {
            auto& a = rec.at("angles")[std::size_t(part)];
            out.angle[part].sinh_num = parse_phase(a.at("sinh_num").get<std::string>(), env);
            out.angle[part].cosh_num = parse_phase(a.at("cosh_num").get<std::string>(), env);
        }
    };

    SystemSpec round0 = spec;
    parse_round(ext0, round0);

    // Consistency of the separation substitutions with the Hamiltonian.
    if (round0.reduce(round0.hamiltonian) !=
        PhaseExpression::coefficient(ChartElement::variable(round0.ctx, spec.H_sym)))
        throw std::runtime_error(id + ": separation substitutions inconsistent with H");
    if (round0.reduce(round0.l2_phase) !=
        PhaseExpression::coefficient(ChartElement::variable(round0.ctx, spec.L2_sym)))
        throw std::runtime_error(id + ": separation substitutions inconsistent with L2");

    // rho_i = cosh_num^2 - sinh_num^2 on the shell; must be parameter-only.
    RadicalExtension ext = ext0;
    Polynomial rho[2];
    for (int part = 0; part < 2; ++part) {
        PhaseExpression diff = round0.reduce(round0.angle[part].cosh_num *
                                                 round0.angle[part].cosh_num -
                                             round0.angle[part].sinh_num *
                                                 round0.angle[part].sinh_num);
        if (diff.momentum_degree() != 0)
            throw std::runtime_error(id + ": angle normalisation is momentum-dependent");
        ChartElement r = diff.coefficient_at({0, 0});
        if (!detail::parameter_only(r, *cb.chart))
            throw std::runtime_error(id + ": angle normalisation depends on coordinates: " + r.str());
        rho[part] = to_polynomial(r);
        ext.radicals.emplace_back(radical_symbol(part == 0 ? "R1" : "R2"), rho[part]);
    }

    parse_round(ext, spec);
    spec.angle[0].radical = radical_symbol("R1");
    spec.angle[1].radical = radical_symbol("R2");
    spec.angle[0].rho = rho[0];
    spec.angle[1].rho = rho[1];

    // Angle frequencies in conformal time (d tau = dt / fsum):
    //   d/dt sinh(A_i) = cosh(A_i) * dA_i/dt  =>  freq_i = {S_i, H}/C_i * fsum.
    for (int part = 0; part < 2; ++part) {
        PhaseExpression num = spec.reduce(poisson_bracket(spec.angle[part].sinh_num,
                                                          spec.hamiltonian));
        PhaseExpression den = spec.reduce(spec.angle[part].cosh_num);
        auto ratio = detail::phase_ratio(num, den);
        if (!ratio)
            throw std::runtime_error(id + ": angle numerators do not satisfy the flow relation");
        ChartElement freq = *ratio * spec.fsum;
        if (!detail::parameter_only(freq, *cb.chart))
            throw std::runtime_error(id + ": angle frequency is not constant: " + freq.str());
        spec.angle[part].frequency = freq;
    }

    // Integer combination (m, n) with m*freq1 + n*freq2 = 0:
    // m/n = -freq2/freq1 must be rational once k = p/q is fixed.
    ChartElement r = -(spec.angle[1].frequency / spec.angle[0].frequency);
    Polynomial rnum = to_polynomial(r);
    if (!rnum.is_constant())
        throw std::runtime_error(id + ": frequency ratio is not constant: " + r.str());
    GaussianRational rv = rnum.constant_value();
    if (!(rv.im == 0) || rv.re == 0)
        throw std::runtime_error(id + ": frequency ratio is not a nonzero rational");
    spec.m = boost::multiprecision::numerator(rv.re).convert_to<int>();
    spec.n = boost::multiprecision::denominator(rv.re).convert_to<int>();

    return spec;
}

}  // namespace supint
