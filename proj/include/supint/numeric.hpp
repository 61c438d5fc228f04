// SPDX-License-Identifier: Apache-2.0
//
// Floating-point cross-checks independent of the exact core: Runge-Kutta
// integration of Hamilton's equations with drift measurement of constructed
// constants of the motion, and pointwise evaluation of chart expressions at
// random regular points.  Complex charts are integrated as holomorphic flows;
// "conservation" is measured in complex modulus.
#pragma once

#include "supint/system.hpp"

#include <array>
#include <complex>
#include <random>

namespace supint {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Numeric points.
// ---------------------------------------------------------------------------

struct PhasePoint {
    Complex u1, u2;  // base coordinates
    Complex p1, p2;  // conjugate momenta
    std::unordered_map<Symbol, Complex> params;
};

// Symbol valuation at a phase point: chart generators through their numeric
// evaluators at (u1, u2), everything else from the parameter slots.
inline std::function<Complex(Symbol)> symbol_values(const ContextPtr& ctx, const PhasePoint& pt) {
    return [&ctx, &pt](Symbol s) -> Complex {
        if (const GeneratorRule* g = ctx->chart().find(s)) {
            if (!g->eval) throw std::runtime_error("generator has no numeric evaluator: " + sym_name(s));
            return g->eval(pt.u1, pt.u2);
        }
        auto it = pt.params.find(s);
        if (it == pt.params.end())
            throw std::runtime_error("no numeric value for symbol: " + sym_name(s));
        return it->second;
    };
}

inline Complex evaluate_phase(const PhaseExpression& e, const PhasePoint& pt) {
    return e.evaluate(symbol_values(e.context(), pt), pt.p1, pt.p2);
}

// A cleared constant num/den is evaluated as the quotient; the denominator is
// momentum-free but may involve the coordinates.
inline Complex evaluate_cleared(const ClearedPhase& k, const PhasePoint& pt) {
    auto val = symbol_values(k.num.context(), pt);
    Complex d = k.den.evaluate(val);
    if (std::abs(d) < 1e-9) throw std::domain_error("evaluate_cleared: near-singular denominator");
    return k.num.evaluate(val, pt.p1, pt.p2) / d;
}

// Random regular point: every coordinate, momentum, and parameter is drawn
// uniformly from [-2,-0.5] u [0.5,2] to stay clear of the coordinate
// singularities at zero.
inline PhasePoint random_phase_point(const std::vector<Symbol>& parameters, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    std::bernoulli_distribution flip(0.5);
    auto draw = [&]() { return Complex(flip(rng) ? -mag(rng) : mag(rng), 0.0); };
    PhasePoint pt;
    pt.u1 = draw();
    pt.u2 = draw();
    pt.p1 = draw();
    pt.p2 = draw();
    for (Symbol s : parameters) pt.params[s] = draw();
    return pt;
}

// ---------------------------------------------------------------------------
// Hamiltonian flow.
// ---------------------------------------------------------------------------

// Right-hand side of Hamilton's equations, differentiated once symbolically.
struct HamiltonFlow {
    PhaseExpression dHdp1, dHdp2, dHdu1, dHdu2;

    explicit HamiltonFlow(const PhaseExpression& H)
        : dHdp1(H.d_momentum(0)), dHdp2(H.d_momentum(1)),
          dHdu1(H.d_coord(0)), dHdu2(H.d_coord(1)) {}

    std::array<Complex, 4> operator()(const PhasePoint& pt) const {
        return {evaluate_phase(dHdp1, pt), evaluate_phase(dHdp2, pt),
                -evaluate_phase(dHdu1, pt), -evaluate_phase(dHdu2, pt)};
    }
};

// Thrown when a trajectory approaches a singular region and the sample should
// be retried from a fresh point.
struct SingularTrajectory : std::runtime_error {
    SingularTrajectory() : std::runtime_error("trajectory approached a singular region") {}
};

// One classical RK4 step; coordinates and momenta evolve as complex numbers.
inline PhasePoint rk4_step(const HamiltonFlow& flow, const PhasePoint& pt, double dt) {
    auto shifted = [&](const std::array<Complex, 4>& d, double h) {
        PhasePoint q = pt;
        q.u1 += h * d[0];
        q.u2 += h * d[1];
        q.p1 += h * d[2];
        q.p2 += h * d[3];
        return q;
    };
    std::array<Complex, 4> k1, k2, k3, k4;
    try {
        k1 = flow(pt);
        k2 = flow(shifted(k1, dt / 2));
        k3 = flow(shifted(k2, dt / 2));
        k4 = flow(shifted(k3, dt));
    } catch (const std::domain_error&) {
        throw SingularTrajectory();
    }
    PhasePoint next = pt;
    next.u1 += dt / 6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    next.u2 += dt / 6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    next.p1 += dt / 6 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
    next.p2 += dt / 6 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]);
    if (std::abs(next.u1) + std::abs(next.u2) + std::abs(next.p1) + std::abs(next.p2) > 1e4)
        throw SingularTrajectory();
    return next;
}

inline std::vector<PhasePoint> integrate_hamilton(const HamiltonFlow& flow, PhasePoint pt,
                                                  double dt, int steps) {
    std::vector<PhasePoint> traj;
    traj.reserve(std::size_t(steps) + 1);
    traj.push_back(pt);
    for (int i = 0; i < steps; ++i) {
        pt = rk4_step(flow, pt, dt);
        traj.push_back(pt);
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Conservation oracle.
// ---------------------------------------------------------------------------

// Maximum relative drift max_t |K(t) - K(0)| / max(1, |K(0)|) of a cleared
// constant along a trajectory of the system's Hamiltonian flow.  Singular
// trajectories are resampled from derived seeds, a bounded number of times.
inline double numeric_conservation_oracle(const SystemSpec& spec, const ClearedPhase& K,
                                          std::uint64_t seed, int steps = 10000,
                                          double dt = 1e-3) {
    HamiltonFlow flow(spec.hamiltonian);
    const int max_retries = 16;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::mt19937_64 rng(seed + std::uint64_t(attempt) * 0x9e3779b97f4a7c15ull);
        PhasePoint pt = random_phase_point(spec.parameters, rng);
        try {
            Complex k0 = evaluate_cleared(K, pt);
            double scale = std::max(1.0, std::abs(k0));
            double drift = 0.0;
            for (int i = 0; i < steps; ++i) {
                pt = rk4_step(flow, pt, dt);
                drift = std::max(drift, std::abs(evaluate_cleared(K, pt) - k0) / scale);
            }
            return drift;
        } catch (const SingularTrajectory&) {
            continue;
        } catch (const std::domain_error&) {
            continue;
        }
    }
    throw std::runtime_error("numeric_conservation_oracle: no regular trajectory found");
}

}  // namespace supint
