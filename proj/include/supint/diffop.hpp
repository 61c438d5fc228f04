// SPDX-License-Identifier: Apache-2.0
//
// Linear differential operators in two variables with chart-element
// coefficients: composition by the Leibniz rule, commutators, and assembly of
// higher-order symmetries from mixed-derivative templates with the
// Hamiltonian and the second-order symmetry composed on the right.
#pragma once

#include "supint/chart.hpp"

#include <map>
#include <vector>

namespace supint {

class DiffOperator {
public:
    using Key = std::pair<int, int>;  // (d/du1 order, d/du2 order)

    DiffOperator() = default;
    explicit DiffOperator(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static DiffOperator multiplication(ChartElement c) {
        DiffOperator d(c.context());
        d.set({0, 0}, std::move(c));
        return d;
    }
    static DiffOperator derivative(ContextPtr ctx, int coord, int order = 1) {
        DiffOperator d(ctx);
        Key k = coord == 0 ? Key{order, 0} : Key{0, order};
        d.set(k, ChartElement::constant(std::move(ctx), GaussianRational(1)));
        return d;
    }
    static DiffOperator identity(ContextPtr ctx) {
        return multiplication(ChartElement::constant(std::move(ctx), GaussianRational(1)));
    }

    const ContextPtr& context() const { return ctx_; }
    const std::map<Key, ChartElement>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int order() const {
        int d = 0;
        for (auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
        return d;
    }
    ChartElement coefficient_at(Key k) const {
        auto it = terms_.find(k);
        if (it != terms_.end()) return it->second;
        return ChartElement(ctx_);
    }

    void set(Key k, ChartElement c) {
        if (c.is_zero()) terms_.erase(k);
        else terms_.insert_or_assign(k, std::move(c));
    }
    void add(Key k, const ChartElement& c) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(k, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    friend DiffOperator operator+(const DiffOperator& a, const DiffOperator& b) {
        DiffOperator r = a;
        if (r.ctx_ == nullptr) r.ctx_ = b.ctx_;
        for (auto& [k, c] : b.terms_) r.add(k, c);
        return r;
    }
    friend DiffOperator operator-(const DiffOperator& a) {
        DiffOperator r = a;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }
    friend DiffOperator operator-(const DiffOperator& a, const DiffOperator& b) { return a + (-b); }
    friend DiffOperator operator*(const DiffOperator& a, const ChartElement& c) {
        DiffOperator r(a.ctx_);
        if (c.is_zero()) return r;
        for (auto& [k, v] : a.terms_) r.add(k, v * c);
        return r;
    }
    friend DiffOperator operator*(const DiffOperator& a, const GaussianRational& c) {
        DiffOperator r(a.ctx_);
        for (auto& [k, v] : a.terms_) r.add(k, v * c);
        return r;
    }
    DiffOperator& operator+=(const DiffOperator& b) { *this = *this + b; return *this; }
    DiffOperator& operator-=(const DiffOperator& b) { *this = *this - b; return *this; }

    friend bool operator==(const DiffOperator& a, const DiffOperator& b) {
        return (a - b).is_zero();
    }
    friend bool operator!=(const DiffOperator& a, const DiffOperator& b) { return !(a == b); }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto& [k, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += "(" + c.str() + ")";
            if (k.first != 0) out += "*D1" + (k.first == 1 ? std::string{} : "^" + std::to_string(k.first));
            if (k.second != 0) out += "*D2" + (k.second == 1 ? std::string{} : "^" + std::to_string(k.second));
        }
        return out;
    }

private:
    ContextPtr ctx_;
    std::map<Key, ChartElement> terms_;
};

namespace detail {
inline long binom(int n, int k) {
    long r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - j + 1) / j;
    return r;
}
}  // namespace detail

// Action of the operator on a function of the chart.
inline ChartElement apply(const DiffOperator& op, const ChartElement& f) {
    ChartElement r(op.context());
    for (auto& [k, c] : op.terms()) {
        ChartElement g = f;
        for (int i = 0; i < k.first; ++i) g = g.differentiate(0);
        for (int i = 0; i < k.second; ++i) g = g.differentiate(1);
        r += c * g;
    }
    return r;
}

// Operator composition (a then b acting first): (a ∘ b)(f) = a(b(f)).
inline DiffOperator compose(const DiffOperator& a, const DiffOperator& b) {
    DiffOperator r(a.context() ? a.context() : b.context());
    for (auto& [ka, ca] : a.terms()) {
        for (auto& [kb, cb] : b.terms()) {
            // ∂1^a1 ∂2^a2 (cb ∂^kb ·) expanded by Leibniz
            // cache successive derivatives of cb
            std::vector<std::vector<ChartElement>> d(std::size_t(ka.first + 1));
            d[0].resize(std::size_t(ka.second + 1));
            d[0][0] = cb;
            for (int j2 = 1; j2 <= ka.second; ++j2) d[0][std::size_t(j2)] = d[0][std::size_t(j2 - 1)].differentiate(1);
            for (int j1 = 1; j1 <= ka.first; ++j1) {
                d[std::size_t(j1)].resize(std::size_t(ka.second + 1));
                for (int j2 = 0; j2 <= ka.second; ++j2)
                    d[std::size_t(j1)][std::size_t(j2)] = d[std::size_t(j1 - 1)][std::size_t(j2)].differentiate(0);
            }
            for (int j1 = 0; j1 <= ka.first; ++j1)
                for (int j2 = 0; j2 <= ka.second; ++j2) {
                    const ChartElement& dc = d[std::size_t(j1)][std::size_t(j2)];
                    if (dc.is_zero()) continue;
                    GaussianRational w(detail::binom(ka.first, j1) * detail::binom(ka.second, j2));
                    r.add({ka.first - j1 + kb.first, ka.second - j2 + kb.second}, ca * dc * w);
                }
        }
    }
    return r;
}

inline DiffOperator commutator(const DiffOperator& a, const DiffOperator& b) {
    return compose(a, b) - compose(b, a);
}

// Coefficient template for one (j,k) block of a symmetry operator:
//   A ∂1∂2 + B ∂1 + C ∂2 + D, composed with H^j L2^k on the right.
struct SymmetryBlock {
    int j = 0;  // power of H
    int k = 0;  // power of L2
    ChartElement A, B, C, D;
};

// Assemble sum_blocks (A ∂1∂2 + B ∂1 + C ∂2 + D) ∘ H^j ∘ L2^k with the right
// factors memoised.
inline DiffOperator assemble_symmetry(const std::vector<SymmetryBlock>& blocks,
                                      const DiffOperator& H, const DiffOperator& L2) {
    if (blocks.empty()) return {};
    ContextPtr ctx = H.context();
    std::vector<DiffOperator> Hpow{DiffOperator::identity(ctx)};
    std::vector<DiffOperator> Lpow{DiffOperator::identity(ctx)};
    auto hp = [&](int j) -> const DiffOperator& {
        while ((int)Hpow.size() <= j) Hpow.push_back(compose(Hpow.back(), H));
        return Hpow[std::size_t(j)];
    };
    auto lp = [&](int k) -> const DiffOperator& {
        while ((int)Lpow.size() <= k) Lpow.push_back(compose(Lpow.back(), L2));
        return Lpow[std::size_t(k)];
    };
    DiffOperator result(ctx);
    DiffOperator d1 = DiffOperator::derivative(ctx, 0);
    DiffOperator d2 = DiffOperator::derivative(ctx, 1);
    DiffOperator d12 = compose(d1, d2);
    for (auto& blk : blocks) {
        DiffOperator front = d12 * blk.A + d1 * blk.B + d2 * blk.C;
        if (!blk.D.is_zero()) front += DiffOperator::multiplication(blk.D);
        DiffOperator right = compose(hp(blk.j), lp(blk.k));
        result += compose(front, right);
    }
    return result;
}

}  // namespace supint
