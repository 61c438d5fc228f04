// SPDX-License-Identifier: Apache-2.0
//
// A small expression parser shared by the system catalog and the command line
// tool.  Two back ends:
//   * parse_element: exact arithmetic over a chart ('+','-','*','/','^',
//     integers, 'i', named symbols/rational constants).
//   * parse_numeric: the same grammar plus function calls (exp, sin, cos,
//     sinh, cosh, sqrt) producing a complex-valued evaluator of (u1, u2),
//     used to attach numeric rules to chart generators.
#pragma once

#include "supint/phase.hpp"

#include <cctype>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace supint {

struct ParseEnv {
    std::unordered_map<std::string, ChartElement> names;       // symbols, momenta
    std::unordered_map<std::string, GaussianRational> scalars;  // instantiated constants (k, p, q, ...)
    ContextPtr ctx;

    void bind(const std::string& n, ChartElement e) { names.emplace(n, std::move(e)); }
    void bind_scalar(const std::string& n, GaussianRational v) { scalars.emplace(n, std::move(v)); }
};

namespace detail {

struct Lexer {
    std::string src;
    std::size_t pos = 0;

    void skip() {
        while (pos < src.size() && std::isspace((unsigned char)src[pos])) ++pos;
    }
    bool eof() {
        skip();
        return pos >= src.size();
    }
    char peek() {
        skip();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw std::runtime_error("parse error: expected '" + std::string(1, c) + "' at \"" +
                                     src.substr(pos) + "\"");
    }
    long integer() {
        skip();
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit((unsigned char)src[pos])) ++pos;
        if (start == pos) throw std::runtime_error("parse error: expected integer in \"" + src + "\"");
        return std::stol(src.substr(start, pos - start));
    }
    long signed_integer() {
        skip();
        bool neg = accept('-');
        long v = integer();
        return neg ? -v : v;
    }
    std::string ident() {
        skip();
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum((unsigned char)src[pos]) || src[pos] == '_')) ++pos;
        return src.substr(start, pos - start);
    }
    bool ident_ahead() {
        char c = peek();
        return std::isalpha((unsigned char)c) || c == '_';
    }
};

// Generic recursive-descent driver over a value type V supplied with the
// operations it needs.
template <typename V, typename Ops>
struct Parser {
    Lexer lx;
    const Ops& ops;

    V expr() {
        V v = accept_unary();
        for (;;) {
            if (lx.accept('+')) v = ops.add(v, accept_unary());
            else if (lx.accept('-')) v = ops.sub(v, accept_unary());
            else return v;
        }
    }
    V accept_unary() {
        if (lx.accept('-')) return ops.neg(accept_unary());
        return term();
    }
    V term() {
        V v = power();
        for (;;) {
            if (lx.accept('*')) v = ops.mul(v, unary_power());
            else if (lx.accept('/')) v = ops.div(v, unary_power());
            else return v;
        }
    }
    V unary_power() {
        if (lx.accept('-')) return ops.neg(unary_power());
        return power();
    }
    V power() {
        V v = primary();
        if (lx.accept('^')) {
            long e = lx.accept('(') ? [&] { long k = lx.signed_integer(); lx.expect(')'); return k; }()
                                    : lx.signed_integer();
            v = ops.pow(v, (int)e);
        }
        return v;
    }
    V primary() {
        if (lx.accept('(')) {
            V v = expr();
            lx.expect(')');
            return v;
        }
        if (lx.ident_ahead()) {
            std::string name = lx.ident();
            if (lx.accept('(')) {
                V arg = expr();
                lx.expect(')');
                return ops.call(name, arg);
            }
            return ops.name(name);
        }
        return ops.integer(lx.integer());
    }
};

}  // namespace detail

// -- exact back end ---------------------------------------------------------
inline ChartElement parse_element(const std::string& src, const ParseEnv& env) {
    struct Ops {
        const ParseEnv& env;
        ChartElement add(const ChartElement& a, const ChartElement& b) const { return a + b; }
        ChartElement sub(const ChartElement& a, const ChartElement& b) const { return a - b; }
        ChartElement mul(const ChartElement& a, const ChartElement& b) const { return a * b; }
        ChartElement div(const ChartElement& a, const ChartElement& b) const { return a / b; }
        ChartElement neg(const ChartElement& a) const { return -a; }
        ChartElement pow(const ChartElement& a, int e) const { return a.pow(e); }
        ChartElement integer(long v) const {
            return ChartElement::constant(env.ctx, GaussianRational(v));
        }
        ChartElement name(const std::string& n) const {
            if (n == "i") return ChartElement::constant(env.ctx, GaussianRational::i());
            if (auto it = env.names.find(n); it != env.names.end()) return it->second;
            if (auto it = env.scalars.find(n); it != env.scalars.end())
                return ChartElement::constant(env.ctx, it->second);
            throw std::runtime_error("parse error: unknown name '" + n + "'");
        }
        ChartElement call(const std::string& n, const ChartElement&) const {
            throw std::runtime_error("parse error: function '" + n + "' not allowed in exact expressions");
        }
    } ops{env};
    detail::Parser<ChartElement, Ops> p{{src}, ops};
    ChartElement v = p.expr();
    if (!p.lx.eof())
        throw std::runtime_error("parse error: trailing input in \"" + src + "\"");
    return v;
}

// -- phase-space back end -----------------------------------------------------
// Same grammar over momentum polynomials; 'p1' and 'p2' denote the momenta.
// Division is only defined by momentum-free expressions.
inline PhaseExpression parse_phase(const std::string& src, const ParseEnv& env) {
    struct Ops {
        const ParseEnv& env;
        PhaseExpression add(const PhaseExpression& a, const PhaseExpression& b) const { return a + b; }
        PhaseExpression sub(const PhaseExpression& a, const PhaseExpression& b) const { return a - b; }
        PhaseExpression mul(const PhaseExpression& a, const PhaseExpression& b) const { return a * b; }
        PhaseExpression div(const PhaseExpression& a, const PhaseExpression& b) const {
            if (b.momentum_degree() != 0)
                throw std::runtime_error("parse error: division by momentum-dependent expression");
            ChartElement d = b.coefficient_at({0, 0});
            PhaseExpression r(env.ctx);
            for (auto& [k, c] : a.terms()) r.add(k, c / d);
            return r;
        }
        PhaseExpression neg(const PhaseExpression& a) const { return -a; }
        PhaseExpression pow(const PhaseExpression& a, int e) const {
            if (e >= 0) return a.pow(e);
            if (a.momentum_degree() != 0)
                throw std::runtime_error("parse error: negative power of momentum-dependent expression");
            return coefficient_expr(a.coefficient_at({0, 0}).pow(e));
        }
        PhaseExpression integer(long v) const {
            return coefficient_expr(ChartElement::constant(env.ctx, GaussianRational(v)));
        }
        PhaseExpression name(const std::string& n) const {
            if (n == "p1") return PhaseExpression::momentum(env.ctx, 0);
            if (n == "p2") return PhaseExpression::momentum(env.ctx, 1);
            if (n == "i") return coefficient_expr(ChartElement::constant(env.ctx, GaussianRational::i()));
            if (auto it = env.names.find(n); it != env.names.end())
                return coefficient_expr(it->second);
            if (auto it = env.scalars.find(n); it != env.scalars.end())
                return coefficient_expr(ChartElement::constant(env.ctx, it->second));
            throw std::runtime_error("parse error: unknown name '" + n + "'");
        }
        PhaseExpression call(const std::string& n, const PhaseExpression&) const {
            throw std::runtime_error("parse error: function '" + n + "' not allowed in exact expressions");
        }
        PhaseExpression coefficient_expr(ChartElement c) const {
            return PhaseExpression::coefficient(std::move(c));
        }
    } ops{env};
    detail::Parser<PhaseExpression, Ops> p{{src}, ops};
    PhaseExpression v = p.expr();
    if (!p.lx.eof())
        throw std::runtime_error("parse error: trailing input in \"" + src + "\"");
    return v;
}

// -- numeric back end --------------------------------------------------------
using NumericFn = std::function<std::complex<double>(std::complex<double>, std::complex<double>)>;

inline NumericFn parse_numeric(const std::string& src,
                               const std::unordered_map<std::string, GaussianRational>& scalars) {
    using C = std::complex<double>;
    struct Ops {
        const std::unordered_map<std::string, GaussianRational>& scalars;
        NumericFn add(NumericFn a, NumericFn b) const {
            return [a, b](C x, C y) { return a(x, y) + b(x, y); };
        }
        NumericFn sub(NumericFn a, NumericFn b) const {
            return [a, b](C x, C y) { return a(x, y) - b(x, y); };
        }
        NumericFn mul(NumericFn a, NumericFn b) const {
            return [a, b](C x, C y) { return a(x, y) * b(x, y); };
        }
        NumericFn div(NumericFn a, NumericFn b) const {
            return [a, b](C x, C y) { return a(x, y) / b(x, y); };
        }
        NumericFn neg(NumericFn a) const {
            return [a](C x, C y) { return -a(x, y); };
        }
        NumericFn pow(NumericFn a, int e) const {
            return [a, e](C x, C y) { return std::pow(a(x, y), e); };
        }
        NumericFn integer(long v) const {
            return [v](C, C) { return C((double)v, 0.0); };
        }
        NumericFn name(const std::string& n) const {
            if (n == "i") return [](C, C) { return C(0.0, 1.0); };
            if (n == "u1") return [](C x, C) { return x; };
            if (n == "u2") return [](C, C y) { return y; };
            if (auto it = scalars.find(n); it != scalars.end()) {
                C v = it->second.to_complex();
                return [v](C, C) { return v; };
            }
            throw std::runtime_error("parse error: unknown numeric name '" + n + "'");
        }
        NumericFn call(const std::string& n, NumericFn a) const {
            if (n == "exp") return [a](C x, C y) { return std::exp(a(x, y)); };
            if (n == "sin") return [a](C x, C y) { return std::sin(a(x, y)); };
            if (n == "cos") return [a](C x, C y) { return std::cos(a(x, y)); };
            if (n == "sinh") return [a](C x, C y) { return std::sinh(a(x, y)); };
            if (n == "cosh") return [a](C x, C y) { return std::cosh(a(x, y)); };
            if (n == "sqrt") return [a](C x, C y) { return std::sqrt(a(x, y)); };
            throw std::runtime_error("parse error: unknown function '" + n + "'");
        }
    } ops{scalars};
    detail::Parser<NumericFn, Ops> p{{src}, ops};
    NumericFn v = p.expr();
    if (!p.lx.eof())
        throw std::runtime_error("parse error: trailing input in \"" + src + "\"");
    return v;
}

}  // namespace supint
