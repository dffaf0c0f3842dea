#include "abcde/storage_layout.hpp"

#include <algorithm>
#include <set>

#include "abcde/inheritance.hpp"

namespace abcde::sol {

namespace {

constexpr int kMaxStructDepth = 32;

struct Resolver {
    const SourceUnit& unit;
    std::vector<const ContractDef*> scopes;  // most-derived first
    int depth = 0;

    const StructDef* find_struct(const std::string& name) const {
        const auto dot = name.find('.');
        if (dot != std::string::npos) {
            const ContractDef* c = unit.find_contract(name.substr(0, dot));
            if (!c) return nullptr;
            for (const auto& s : c->structs)
                if (s.name == name.substr(dot + 1)) return &s;
            return nullptr;
        }
        for (const ContractDef* c : scopes)
            for (const auto& s : c->structs)
                if (s.name == name) return &s;
        for (const auto& s : unit.structs)
            if (s.name == name) return &s;
        return nullptr;
    }

    const EnumDef* find_enum(const std::string& name) const {
        const auto dot = name.find('.');
        if (dot != std::string::npos) {
            const ContractDef* c = unit.find_contract(name.substr(0, dot));
            if (!c) return nullptr;
            for (const auto& e : c->enums)
                if (e.name == name.substr(dot + 1)) return &e;
            return nullptr;
        }
        for (const ContractDef* c : scopes)
            for (const auto& e : c->enums)
                if (e.name == name) return &e;
        for (const auto& e : unit.enums)
            if (e.name == name) return &e;
        return nullptr;
    }

    StorageSize size_of(const TypeName& t) {
        switch (t.kind) {
        case TypeName::Kind::mapping: return {32, 1, false};
        case TypeName::Kind::array: {
            if (!t.length) return {32, 1, false};
            const StorageSize elem = size_of(t.element());
            std::uint64_t slots = 0;
            if (elem.packable && elem.bytes <= 16) {
                const std::uint64_t per_slot = 32 / elem.bytes;
                slots = (*t.length + per_slot - 1) / per_slot;
            } else {
                slots = *t.length * elem.slots;
            }
            return {32, slots, false};
        }
        case TypeName::Kind::elementary: return elementary_size(t.name);
        case TypeName::Kind::user_defined: break;
        }
        if (const EnumDef* e = find_enum(t.name)) {
            std::uint32_t bytes = 1;
            while (bytes < 32 && (e->values.size() - 1) >> (8 * bytes) != 0) ++bytes;
            return {bytes, 1, true};
        }
        if (const StructDef* s = find_struct(t.name)) {
            if (++depth > kMaxStructDepth) throw UnknownTypeError(t.name);
            std::uint64_t slots = 0;
            std::uint32_t used = 0;
            for (const auto& m : s->members) {
                const StorageSize ms = size_of(m.type);
                if (!ms.packable) {
                    if (used > 0) ++slots;
                    slots += ms.slots;
                    used = 0;
                } else {
                    if (used + ms.bytes > 32) {
                        ++slots;
                        used = 0;
                    }
                    used += ms.bytes;
                }
            }
            if (used > 0) ++slots;
            --depth;
            return {32, std::max<std::uint64_t>(slots, 1), false};
        }
        if (unit.find_contract(t.name)) return {20, 1, true};  // contract-typed reference
        throw UnknownTypeError(t.name);
    }

    static StorageSize elementary_size(const std::string& name) {
        if (name == "bool") return {1, 1, true};
        if (name == "address" || name == "address payable") return {20, 1, true};
        if (name == "string" || name == "bytes") return {32, 1, false};
        auto bits = [&](std::size_t prefix) { return static_cast<std::uint32_t>(std::stoul(name.substr(prefix))); };
        if (name.starts_with("uint")) return {bits(4) / 8, 1, true};
        if (name.starts_with("int")) return {bits(3) / 8, 1, true};
        if (name.starts_with("bytes")) return {bits(5), 1, true};
        if (name.starts_with("fixed") || name.starts_with("ufixed")) {
            const auto start = name.find_first_of("0123456789");
            const auto x = name.find('x');
            if (start == std::string::npos || x == std::string::npos) return {16, 1, true};
            return {static_cast<std::uint32_t>(std::stoul(name.substr(start, x - start))) / 8, 1, true};
        }
        throw UnknownTypeError(name);
    }
};

bool takes_slot(const VarDecl& v) { return !v.is_constant && !v.is_immutable; }

struct Cursor {
    std::uint64_t slot = 0;
    std::uint32_t used = 0;

    void place(const VarDecl& v, const std::string& contract, const StorageSize& sz, StorageLayout& out) {
        LayoutEntry e{v.name, contract, v.type_name.to_string(), 0, 0, sz.bytes};
        if (!sz.packable) {
            if (used > 0) {
                ++slot;
                used = 0;
            }
            e.slot = slot;
            slot += sz.slots;
        } else {
            if (used + sz.bytes > 32) {
                ++slot;
                used = 0;
            }
            e.slot = slot;
            e.offset = used;
            used += sz.bytes;
        }
        out.entries.push_back(std::move(e));
    }

    std::uint64_t total() const { return slot + (used > 0 ? 1 : 0); }
};

StorageLayout build(const ContractDef& contract, const SourceUnit& unit,
                    const std::vector<std::string>* own_order) {
    const auto chain = linearized_contracts(contract, unit);
    Resolver resolver{unit, chain};
    StorageLayout out;
    Cursor cursor;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const ContractDef& c = **it;
        std::vector<const VarDecl*> vars;
        for (const auto& v : c.state_vars)
            if (takes_slot(v)) vars.push_back(&v);
        if (&c == &contract && own_order) {
            std::vector<const VarDecl*> ordered;
            for (const auto& name : *own_order) {
                auto found = std::find_if(vars.begin(), vars.end(), [&](const VarDecl* v) { return v->name == name; });
                if (found == vars.end()) throw std::invalid_argument("'" + name + "' is not a state variable of " + c.name);
                ordered.push_back(*found);
            }
            if (ordered.size() != vars.size()) throw std::invalid_argument("order is not a permutation");
            vars = std::move(ordered);
        }
        for (const VarDecl* v : vars) cursor.place(*v, c.name, resolver.size_of(v->type_name), out);
    }
    out.total_slots = cursor.total();
    return out;
}

}  // namespace

std::vector<const ContractDef*> linearized_contracts(const ContractDef& contract, const SourceUnit& unit) {
    auto lookup = [&](const std::string& name) -> std::optional<std::vector<std::string>> {
        if (name == contract.name) return contract.parents;
        if (const ContractDef* c = unit.find_contract(name)) return c->parents;
        return std::nullopt;
    };
    std::vector<const ContractDef*> out;
    for (const auto& name : c3_linearize(contract.name, lookup))
        out.push_back(name == contract.name ? &contract : unit.find_contract(name));
    return out;
}

StorageSize storage_size(const TypeName& type, const ContractDef& scope, const SourceUnit& unit) {
    Resolver resolver{unit, linearized_contracts(scope, unit)};
    return resolver.size_of(type);
}

StorageLayout storage_layout(const ContractDef& contract, const SourceUnit& unit) {
    return build(contract, unit, nullptr);
}

StorageLayout storage_layout(const ContractDef& contract, const SourceUnit& unit,
                             const std::vector<std::string>& own_order) {
    return build(contract, unit, &own_order);
}

}  // namespace abcde::sol
