// SPDX-License-Identifier: Apache-2.0
//
// Globally interned symbols.  Each symbol carries a kind used by the
// monomial order: chart generators sort before radicals, radicals before
// parameters realising the "graded lex over (generators, then parameters)"
// order that keeps golden-file output deterministic.
#pragma once

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace supint {

using Symbol = std::uint32_t;

enum class SymKind : std::uint8_t {
    Generator = 0,  // chart coordinate-ring generator (u1, e^{2R}, sin k0, ...)
    Radical = 1,    // adjoined square root R_i with R_i^2 = rho_i
    Parameter = 2,  // omega, alpha, H, L2, ...
};

class SymbolTable {
public:
    static SymbolTable& instance() {
        static SymbolTable t;
        return t;
    }

    Symbol intern(const std::string& name, SymKind kind) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = index_.find(name);
        if (it != index_.end()) {
            if (entries_[it->second].kind != kind)
                throw std::logic_error("symbol '" + name + "' re-interned with different kind");
            return it->second;
        }
        Symbol s = static_cast<Symbol>(entries_.size());
        // sort_key: kind rank prefix, then name; gives a stable total order
        // independent of interning sequence.
        entries_.push_back({name, kind, std::string(1, char('0' + int(kind))) + name});
        index_.emplace(name, s);
        return s;
    }

    const std::string& name(Symbol s) const { return entries_.at(s).name; }
    SymKind kind(Symbol s) const { return entries_.at(s).kind; }
    const std::string& sort_key(Symbol s) const { return entries_.at(s).sort_key; }

private:
    struct Entry {
        std::string name;
        SymKind kind;
        std::string sort_key;
    };
    mutable std::mutex mu_;
    std::vector<Entry> entries_;
    std::unordered_map<std::string, Symbol> index_;
};

inline Symbol intern(const std::string& name, SymKind kind) {
    return SymbolTable::instance().intern(name, kind);
}
inline Symbol param(const std::string& name) { return intern(name, SymKind::Parameter); }
inline Symbol generator_symbol(const std::string& name) { return intern(name, SymKind::Generator); }
inline Symbol radical_symbol(const std::string& name) { return intern(name, SymKind::Radical); }

inline const std::string& sym_name(Symbol s) { return SymbolTable::instance().name(s); }
inline SymKind sym_kind(Symbol s) { return SymbolTable::instance().kind(s); }

// Total order: generators < radicals < parameters, ties broken by name.
inline int sym_cmp(Symbol a, Symbol b) {
    if (a == b) return 0;
    const auto& ka = SymbolTable::instance().sort_key(a);
    const auto& kb = SymbolTable::instance().sort_key(b);
    int c = ka.compare(kb);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace supint
