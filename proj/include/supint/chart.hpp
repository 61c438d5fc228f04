// SPDX-License-Identifier: Apache-2.0
//
// Coordinate charts and their fraction fields.
//
// A Chart is a coordinate ring presented by generators (u1, e^{2R},
// sin(k*theta), ...) each with a derivative rule per coordinate, an optional
// quadratic relation (c^2 = 1 - s^2, chi^2 = 1 + sigma^2) and a numeric
// evaluator used by the floating-point oracle.  A RadicalExtension adjoins
// square roots R_i of parameter-ring elements (R_i^2 = rho_i).  ChartElement
// is the workhorse fraction num/den over the combined ring, kept in a
// relation-reduced, gcd-cancelled normal form with monic denominator.
#pragma once

#include "supint/polynomial.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace supint {

// Numeric evaluator for one generator: value as a function of the two
// coordinate values (complex).
using GeneratorEval = std::function<std::complex<double>(std::complex<double>, std::complex<double>)>;

struct GeneratorRule {
    Symbol sym;
    int coord = 0;                        // which coordinate it depends on (0 or 1)
    Polynomial derivative;                // d(sym)/d(u_coord) as polynomial in generators
    std::optional<Polynomial> square;     // quadratic relation: sym^2 = square
    bool invertible = false;              // may appear with negative exponents
    GeneratorEval eval;                   // numeric value at (u1,u2)
};

class Chart {
public:
    Chart() = default;
    explicit Chart(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }

    void add_generator(GeneratorRule rule) {
        index_[rule.sym] = generators_.size();
        generators_.push_back(std::move(rule));
    }

    const std::vector<GeneratorRule>& generators() const { return generators_; }
    const GeneratorRule* find(Symbol s) const {
        auto it = index_.find(s);
        return it == index_.end() ? nullptr : &generators_[it->second];
    }
    bool has(Symbol s) const { return index_.count(s) != 0; }

private:
    std::string name_;
    std::vector<GeneratorRule> generators_;
    std::unordered_map<Symbol, std::size_t> index_;
};

struct RadicalExtension {
    // (radical symbol, defining polynomial): R^2 = rho over the parameter ring
    std::vector<std::pair<Symbol, Polynomial>> radicals;

    const Polynomial* find(Symbol s) const {
        for (auto& [r, rho] : radicals)
            if (r == s) return &rho;
        return nullptr;
    }
};

// Everything a ChartElement needs to normalise itself.
class Context {
public:
    Context(std::shared_ptr<const Chart> chart, RadicalExtension radicals = {})
        : chart_(std::move(chart)), radicals_(std::move(radicals)) {}

    const Chart& chart() const { return *chart_; }
    const std::shared_ptr<const Chart>& chart_ptr() const { return chart_; }
    const RadicalExtension& radicals() const { return radicals_; }

    // Extend with additional radicals (returns a new context sharing the chart).
    std::shared_ptr<const Context> with_radicals(RadicalExtension more) const {
        RadicalExtension all = radicals_;
        for (auto& r : more.radicals) all.radicals.push_back(r);
        return std::make_shared<const Context>(chart_, std::move(all));
    }

    const Polynomial* relation(Symbol s) const {
        if (const GeneratorRule* g = chart_->find(s))
            return g->square ? &*g->square : nullptr;
        return radicals_.find(s);
    }
    const Polynomial* derivative_rule(Symbol s, int coord) const {
        const GeneratorRule* g = chart_->find(s);
        if (g == nullptr || g->coord != coord) return nullptr;
        return &g->derivative;
    }
    bool is_invertible(Symbol s) const {
        const GeneratorRule* g = chart_->find(s);
        return g != nullptr && g->invertible;
    }

    Polynomial reduce(const Polynomial& p) const {
        return reduce_relations(p, [this](Symbol s) { return relation(s); });
    }
    Polynomial differentiate(const Polynomial& p, int coord) const {
        Polynomial d = p.differentiate([this, coord](Symbol s) { return derivative_rule(s, coord); });
        return reduce(d);
    }

private:
    std::shared_ptr<const Chart> chart_;
    RadicalExtension radicals_;
};

using ContextPtr = std::shared_ptr<const Context>;

// Thrown by antiderivative() when a monomial has no antiderivative inside
// the chart ring (e.g. the logarithmic exponent -1 case).
struct NotClosed : std::runtime_error {
    explicit NotClosed(const std::string& what) : std::runtime_error(what) {}
};

namespace chart_detail {

// Antiderivative of s^b t^e for a trigonometric generator pair
//   s' = c t,  t' = -c s,  t^2 = 1 - s^2        (e restricted to {0, 1}).
// With t present the power rule on s^{b+1} applies directly; pure powers of
// s reduce by the classical recurrence
//   d/dx (t s^{b+1}) = c (b+1) s^b - c (b+2) s^{b+2},
// which closes exactly for odd positive and even negative b and hits the
// logarithmic obstruction otherwise.
inline Polynomial trig_power_integral(Symbol s, Symbol t, const GaussianRational& c, int b, int e) {
    auto mono = [](Symbol sym, int k) {
        Monomial m;
        if (k != 0) m.e.emplace_back(sym, k);
        return m;
    };
    if (e == 1) {
        if (b == -1) throw NotClosed("antiderivative: logarithmic trigonometric monomial");
        return monomial_poly(mono(s, b + 1), (c * GaussianRational(b + 1)).inverse());
    }
    if (e != 0) throw NotClosed("antiderivative: unreduced power of a constrained generator");
    if (b == 1) return monomial_poly(mono(t, 1), -c.inverse());
    if (b == -2) return monomial_poly(mono(t, 1) * mono(s, -1), -c.inverse());
    if (b > 1 && b % 2 == 1) {
        Polynomial lower = trig_power_integral(s, t, c, b - 2, 0);
        return (lower * GaussianRational(b - 1) -
                monomial_poly(mono(t, 1) * mono(s, b - 1), c.inverse())) *
               GaussianRational{Rational(1, b)};
    }
    if (b < -2 && b % 2 == 0) {
        Polynomial upper = trig_power_integral(s, t, c, b + 2, 0);
        return (upper * GaussianRational(b + 2) +
                monomial_poly(mono(t, 1) * mono(s, b + 1), c.inverse())) *
               GaussianRational{Rational(1, b + 1)};
    }
    throw NotClosed("antiderivative: pure trigonometric power has no closed antiderivative");
}

}  // namespace chart_detail

// ---------------------------------------------------------------------------
// ChartElement: normalised fraction over the chart ring.
// ---------------------------------------------------------------------------
class ChartElement {
public:
    ChartElement() = default;
    explicit ChartElement(ContextPtr ctx) : ctx_(std::move(ctx)), num_(), den_(1) {}
    ChartElement(ContextPtr ctx, Polynomial num)
        : ctx_(std::move(ctx)), num_(std::move(num)), den_(1) {
        num_ = ctx_->reduce(num_);
    }
    ChartElement(ContextPtr ctx, Polynomial num, Polynomial den)
        : ctx_(std::move(ctx)), num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }

    const ContextPtr& context() const { return ctx_; }
    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    static ChartElement constant(ContextPtr ctx, GaussianRational c) {
        ChartElement e(std::move(ctx));
        e.num_ = Polynomial(std::move(c));
        return e;
    }
    static ChartElement variable(ContextPtr ctx, Symbol s, int exp = 1) {
        if (exp < 0) {
            ChartElement e(ctx);
            e.num_ = Polynomial(1);
            e.den_ = Polynomial::variable(s, -exp);
            e.normalize();
            return e;
        }
        ChartElement e(std::move(ctx));
        e.num_ = Polynomial::variable(s, exp);
        e.num_ = e.ctx_->reduce(e.num_);
        return e;
    }
    static ChartElement from_poly(ContextPtr ctx, Polynomial p) {
        return ChartElement(std::move(ctx), std::move(p));
    }

    friend ChartElement operator+(const ChartElement& a, const ChartElement& b) {
        a.check_same(b);
        ChartElement r(a.ctx_);
        if (a.den_ == b.den_) {
            r.num_ = a.num_ + b.num_;
            r.den_ = a.den_;
        } else {
            r.num_ = a.num_ * b.den_ + b.num_ * a.den_;
            r.den_ = a.den_ * b.den_;
        }
        r.normalize();
        return r;
    }
    friend ChartElement operator-(const ChartElement& a) {
        ChartElement r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend ChartElement operator-(const ChartElement& a, const ChartElement& b) { return a + (-b); }
    friend ChartElement operator*(const ChartElement& a, const ChartElement& b) {
        a.check_same(b);
        ChartElement r(a.ctx_);
        r.num_ = a.num_ * b.num_;
        r.den_ = a.den_ * b.den_;
        r.normalize();
        return r;
    }
    friend ChartElement operator/(const ChartElement& a, const ChartElement& b) {
        a.check_same(b);
        if (b.is_zero()) throw std::domain_error("ChartElement: division by zero");
        ChartElement r(a.ctx_);
        r.num_ = a.num_ * b.den_;
        r.den_ = a.den_ * b.num_;
        r.normalize();
        return r;
    }
    ChartElement& operator+=(const ChartElement& b) { *this = *this + b; return *this; }
    ChartElement& operator-=(const ChartElement& b) { *this = *this - b; return *this; }
    ChartElement& operator*=(const ChartElement& b) { *this = *this * b; return *this; }
    ChartElement& operator/=(const ChartElement& b) { *this = *this / b; return *this; }

    friend ChartElement operator*(const ChartElement& a, const GaussianRational& c) {
        ChartElement r = a;
        r.num_ = r.num_ * c;
        if (c.is_zero()) r.den_ = Polynomial(1);
        return r;
    }
    friend ChartElement operator*(const GaussianRational& c, const ChartElement& a) { return a * c; }

    ChartElement pow(int k) const {
        if (k < 0) {
            if (is_zero()) throw std::domain_error("ChartElement::pow: zero to negative power");
            ChartElement inv(ctx_);
            inv.num_ = den_;
            inv.den_ = num_;
            inv.normalize();
            return inv.pow(-k);
        }
        ChartElement acc = constant(ctx_, GaussianRational(1));
        ChartElement base = *this;
        while (k > 0) {
            if (k & 1) acc *= base;
            base *= base;
            k >>= 1;
        }
        return acc;
    }

    // Equality by cross multiplication (works even if normal forms were to
    // differ by a unit; with full normalisation it's just a term compare).
    friend bool operator==(const ChartElement& a, const ChartElement& b) {
        a.check_same(b);
        if (a.num_ == b.num_ && a.den_ == b.den_) return true;
        return a.ctx_->reduce(a.num_ * b.den_ - b.num_ * a.den_).is_zero();
    }
    friend bool operator!=(const ChartElement& a, const ChartElement& b) { return !(a == b); }

    ChartElement differentiate(int coord) const {
        // (n/d)' = (n'd - nd')/d^2
        ChartElement r(ctx_);
        Polynomial dn = ctx_->differentiate(num_, coord);
        if (is_polynomial()) {
            r.num_ = dn;
            r.den_ = den_;
        } else {
            Polynomial dd = ctx_->differentiate(den_, coord);
            r.num_ = dn * den_ - num_ * dd;
            r.den_ = den_ * den_;
        }
        r.normalize();
        return r;
    }

    // Antiderivative with respect to coordinate `coord`; defined for
    // elements with a coordinate-free denominator whose coordinate dependence
    // per numerator monomial sits in a single generator that is coordinate-
    // like (derivative = const) or exponential-like (derivative = const *
    // itself), or in a sine/cosine generator pair.
    ChartElement antiderivative(int coord) const {
        for (const auto& dt : den_.terms())
            for (const auto& [ds, dk] : dt.m.e)
                if (ctx_->chart().find(ds) != nullptr)
                    throw NotClosed("antiderivative: coordinate-dependent denominator: " + str());
        Polynomial result;
        // A sine/cosine pair: s' = c t, t' = -c s with t carrying the square
        // relation.  Returns the (s, t, c) triple if `sym` belongs to such a
        // pair on this coordinate, nullopt otherwise.
        struct TrigPair { Symbol s, t; GaussianRational c; };
        auto trig_pair = [&](Symbol sym) -> std::optional<TrigPair> {
            auto linear_partner = [&](const GeneratorRule* g) -> const GeneratorRule* {
                if (g == nullptr || g->derivative.size() != 1) return nullptr;
                const auto& lead = g->derivative.leading();
                if (lead.m.e.size() != 1 || lead.m.e[0].second != 1) return nullptr;
                const GeneratorRule* o = ctx_->chart().find(lead.m.e[0].first);
                return (o != nullptr && o->coord == coord) ? o : nullptr;
            };
            const GeneratorRule* g = ctx_->chart().find(sym);
            const GeneratorRule* o = linear_partner(g);
            if (o == nullptr || linear_partner(o) != g) return std::nullopt;
            const GeneratorRule *sg = g->square ? o : g, *tg = g->square ? g : o;
            if (!tg->square || sg->square) return std::nullopt;
            GaussianRational c = sg->derivative.leading().c;
            if (!(tg->derivative == monomial_poly(Monomial{{{sg->sym, 1}}}, -c))) return std::nullopt;
            return TrigPair{sg->sym, tg->sym, c};
        };
        for (auto& t : num_.terms()) {
            // find generators of this monomial that depend on coord
            Symbol dep = 0;
            int dep_exp = 0;
            int dep_count = 0;
            std::vector<std::pair<Symbol, int>> deps;
            for (auto& [s, k] : t.m.e) {
                const Polynomial* d = ctx_->derivative_rule(s, coord);
                if (d != nullptr && !d->is_zero()) {
                    ++dep_count;
                    dep = s;
                    dep_exp = k;
                    deps.emplace_back(s, k);
                }
            }
            if (dep_count == 2) {
                // both members of a sine/cosine pair present in one monomial
                std::optional<TrigPair> tp = trig_pair(deps[0].first);
                if (!tp || (tp->s != deps[1].first && tp->t != deps[1].first))
                    throw NotClosed("antiderivative: mixed generators in monomial " +
                                    monomial_poly(t.m, t.c).str());
                int b = t.m.exponent(tp->s), e = t.m.exponent(tp->t);
                Monomial rest;
                for (const auto& [s, k] : t.m.e)
                    if (s != tp->s && s != tp->t) rest.e.emplace_back(s, k);
                result += monomial_poly(rest, t.c) *
                          chart_detail::trig_power_integral(tp->s, tp->t, tp->c, b, e);
                continue;
            }
            if (dep_count > 2)
                throw NotClosed("antiderivative: mixed generators in monomial " + monomial_poly(t.m, t.c).str());
            if (dep_count == 0) {
                // constant in coord: need a coordinate-like generator to hold it
                const GeneratorRule* coord_gen = nullptr;
                for (auto& g : ctx_->chart().generators())
                    if (g.coord == coord && g.derivative.is_constant() && !g.derivative.is_zero() &&
                        !g.square) {
                        coord_gen = &g;
                        break;
                    }
                if (coord_gen == nullptr)
                    throw NotClosed("antiderivative: constant term with no coordinate generator: " +
                                    monomial_poly(t.m, t.c).str());
                GaussianRational c = coord_gen->derivative.constant_value();
                result += monomial_poly(t.m * Monomial{{{coord_gen->sym, 1}}}, t.c / c);
                continue;
            }
            const GeneratorRule* g = ctx_->chart().find(dep);
            const Polynomial& d = g->derivative;
            if (d.is_constant()) {
                // power rule: s' = c  =>  int s^k = s^{k+1}/(c(k+1)), k != -1
                if (dep_exp == -1)
                    throw NotClosed("antiderivative: logarithmic monomial " +
                                    monomial_poly(t.m, t.c).str());
                GaussianRational c = d.constant_value() * GaussianRational(dep_exp + 1);
                result += monomial_poly(t.m * Monomial{{{dep, 1}}}, t.c / c);
            } else if (d.size() == 1 && d.leading().m == Monomial{{{dep, 1}}}) {
                // exponential rule: s' = c*s  =>  int s^k = s^k/(ck), k != 0
                GaussianRational c = d.leading().c * GaussianRational(dep_exp);
                result += monomial_poly(t.m, t.c / c);
            } else if (std::optional<TrigPair> tp = trig_pair(dep)) {
                int b = dep == tp->s ? dep_exp : 0;
                int e = dep == tp->t ? dep_exp : 0;
                Monomial rest;
                for (const auto& [s, k] : t.m.e)
                    if (s != dep) rest.e.emplace_back(s, k);
                result += monomial_poly(rest, t.c) *
                          chart_detail::trig_power_integral(tp->s, tp->t, tp->c, b, e);
            } else {
                throw NotClosed("antiderivative: unsupported generator rule for monomial " +
                                monomial_poly(t.m, t.c).str());
            }
        }
        ChartElement r(ctx_);
        r.num_ = result;
        r.den_ = den_;
        r.normalize();
        return r;
    }

    // Substitute symbols by chart elements (used for parameter swaps and
    // momentum-relation substitution at the phase level).
    ChartElement substitute(const std::unordered_map<Symbol, ChartElement>& map) const {
        ChartElement n = substitute_poly(num_, map);
        ChartElement d = substitute_poly(den_, map);
        return n / d;
    }

    std::complex<double> evaluate(const std::function<std::complex<double>(Symbol)>& val) const {
        std::complex<double> d = den_.evaluate(val);
        if (std::abs(d) < 1e-12) throw std::domain_error("ChartElement::evaluate: near-singular denominator");
        return num_.evaluate(val) / d;
    }

    std::string str() const {
        if (is_polynomial()) {
            if (den_.constant_value().is_one()) return num_.str();
        }
        std::string n = num_.str(), d = den_.str();
        bool np = num_.size() > 1, dp = den_.size() > 1 ||
            (den_.size() == 1 && !(den_.leading().m.empty()));
        std::string out = np ? "(" + n + ")" : n;
        out += " / ";
        out += dp ? "(" + d + ")" : d;
        return out;
    }

private:
    ChartElement substitute_poly(const Polynomial& p,
                                 const std::unordered_map<Symbol, ChartElement>& map) const {
        ChartElement acc(ctx_);
        for (auto& t : p.terms()) {
            ChartElement term = constant(ctx_, t.c);
            Monomial rest;
            for (auto& [s, k] : t.m.e) {
                auto it = map.find(s);
                if (it == map.end()) rest.e.emplace_back(s, k);
                else term *= it->second.pow(k);
            }
            term *= ChartElement(ctx_, monomial_poly(rest, GaussianRational(1)));
            acc += term;
        }
        return acc;
    }

    void check_same(const ChartElement& b) const {
        if (ctx_.get() != b.ctx_.get())
            throw std::logic_error("ChartElement: mixed charts/contexts");
    }

    void normalize() {
        num_ = ctx_->reduce(num_);
        den_ = ctx_->reduce(den_);
        if (den_.is_zero()) throw std::domain_error("ChartElement: zero denominator");
        if (num_.is_zero()) {
            den_ = Polynomial(1);
            return;
        }
        // clear radicals out of the denominator: multiply by each radical
        // appearing with odd exponent (R/R * rho-reduction makes den radical-free)
        for (int guard = 0; guard < 8; ++guard) {
            Symbol odd_radical = 0;
            bool found = false;
            for (auto& t : den_.terms()) {
                for (auto& [s, k] : t.m.e)
                    if (sym_kind(s) == SymKind::Radical && (k % 2) != 0) {
                        odd_radical = s;
                        found = true;
                        break;
                    }
                if (found) break;
            }
            if (!found) break;
            Polynomial r = Polynomial::variable(odd_radical);
            num_ = ctx_->reduce(num_ * r);
            den_ = ctx_->reduce(den_ * r);
        }
        // strip monomial contents (Laurent units)
        Monomial cn, cd;
        Polynomial n = strip_monomial_content(num_, cn);
        Polynomial d = strip_monomial_content(den_, cd);
        // residual unit monomial cn/cd attaches to the numerator
        Monomial unit = cn * cd.pow(-1);
        // cancellation: exact division covers the common cases cheaply; the
        // general gcd (primitive remainder sequences) is only worthwhile for
        // small operands — its coefficient growth is prohibitive otherwise
        if (!n.is_constant() && !d.is_constant()) {
            if (auto qn = divide_exact(n, d)) {
                n = *qn;
                d = Polynomial(1);
            } else if (auto qd = divide_exact(d, n)) {
                d = *qd;
                n = Polynomial(1);
            } else if (n.size() * d.size() <= 256) {
                Polynomial g = poly_gcd(n, d);
                if (!g.is_constant()) {
                    auto q1 = divide_exact(n, g);
                    auto q2 = divide_exact(d, g);
                    if (q1 && q2) {
                        n = *q1;
                        d = *q2;
                    }
                }
            }
        }
        // re-attach the unit; invertible generators may live in the numerator
        // with negative exponents, anything else must go back to den
        Monomial unit_num, unit_den;
        for (auto& [s, k] : unit.e) {
            if (k >= 0 || ctx_->is_invertible(s)) unit_num.e.emplace_back(s, k);
            else unit_den.e.emplace_back(s, -k);
        }
        num_ = n.mul_term({unit_num, GaussianRational(1)});
        den_ = d.mul_term({unit_den, GaussianRational(1)});
        // monic denominator
        GaussianRational lc = den_.leading().c;
        if (!lc.is_one()) {
            GaussianRational inv = lc.inverse();
            num_ = num_ * inv;
            den_ = den_ * inv;
        }
    }

    ContextPtr ctx_;
    Polynomial num_;
    Polynomial den_{1};
};

}  // namespace supint
