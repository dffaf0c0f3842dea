#include "abcde/scaffold.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace abcde {

using namespace model;

namespace {

std::string version_text(const std::array<int, 3>& v) {
    return std::to_string(v[0]) + "." + std::to_string(v[1]) + "." + std::to_string(v[2]);
}

// Unsigned mapping keys are emitted full width.
TypeName widen_keys(TypeName t) {
    for (auto& a : t.args) a = widen_keys(std::move(a));
    if (t.is_mapping() && is_unsigned_integer(t.args[0]) && t.args[0].kind == TypeName::Kind::elementary)
        t.args[0] = TypeName::elementary("uint256");
    return t;
}

std::string sol_type(const TypeName& t) { return widen_keys(t).to_string(); }

// Free text inside a line comment must stay on one line.
std::string comment_text(std::string s) {
    for (char& c : s)
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) c = ' ';
    return s;
}

class Generator {
public:
    Generator(const SystemModel& m, const ScaffoldConfig& cfg) : m_(m), cfg_(cfg) {}

    std::map<std::string, std::string> run() {
        std::map<std::string, std::string> files;
        std::vector<const ContractDecl*> order;
        for (const auto& ref : m_.declaration_order)
            if (ref.kind == DeclKind::contract) order.push_back(&m_.contracts.at(ref.index));
        if (cfg_.one_file_per_contract) {
            for (const ContractDecl* c : order) files[c->name + ".sol"] = file_for({c});
        } else if (!order.empty()) {
            files[(m_.name.empty() ? "System" : m_.name) + ".sol"] = file_for(order);
        }
        return files;
    }

private:
    // ---- type analysis ----------------------------------------------------

    void collect_named(const TypeName& t, std::set<std::string>& out) const {
        if (t.kind == TypeName::Kind::user_defined) out.insert(t.name);
        for (const auto& a : t.args) collect_named(a, out);
    }

    /// Named types mentioned by a contract's own declarations.
    std::set<std::string> mentioned(const ContractDecl& c) const {
        std::set<std::string> out;
        for (const auto& v : c.state_vars) collect_named(v.type, out);
        for (const auto& e : c.events)
            for (const auto& p : e.params) collect_named(p.type, out);
        for (const auto& m : c.modifiers)
            for (const auto& p : m.params) collect_named(p.type, out);
        for (const auto& f : c.functions) {
            for (const auto& p : f.params) collect_named(p.type, out);
            for (const auto& r : f.returns) collect_named(r, out);
        }
        return out;
    }

    /// Closure over struct fields.
    std::set<std::string> closure(std::set<std::string> names) const {
        std::vector<std::string> work(names.begin(), names.end());
        while (!work.empty()) {
            const std::string n = work.back();
            work.pop_back();
            if (const StructDecl* s = m_.find_struct(n)) {
                std::set<std::string> inner;
                for (const auto& f : s->fields) collect_named(f.type, inner);
                for (const auto& i : inner)
                    if (names.insert(i).second) work.push_back(i);
            }
        }
        return names;
    }

    std::vector<std::string> ancestors(const ContractDecl& c) const {
        try {
            auto lin = linearize(m_, c.name);
            lin.erase(lin.begin());
            return lin;
        } catch (const std::exception&) {
            return c.parents;
        }
    }

    /// Struct and enum names a contract has to declare itself.
    std::set<std::string> own_types(const ContractDecl& c) const {
        std::set<std::string> needed;
        for (const auto& n : closure(mentioned(c)))
            if (m_.find_struct(n) || m_.find_enum(n)) needed.insert(n);
        for (const auto& a : ancestors(c)) {
            if (const ContractDecl* p = m_.find_contract(a))
                for (const auto& n : own_types(*p)) needed.erase(n);
        }
        return needed;
    }

    bool is_reference(const TypeName& t) const {
        if (t.is_array() || t.is_mapping()) return true;
        if (t.kind == TypeName::Kind::elementary) return t.name == "string" || t.name == "bytes";
        return m_.find_struct(t.name) != nullptr;
    }

    /// Types the default ABI coder of 0.5 cannot encode.
    bool needs_abi_v2(const TypeName& t) const {
        if (t.kind == TypeName::Kind::user_defined) return m_.find_struct(t.name) != nullptr;
        if (t.is_array()) {
            const TypeName& e = t.element();
            if (e.is_array() && !e.length) return true;
            if (e.kind == TypeName::Kind::elementary && (e.name == "string" || e.name == "bytes")) return true;
            return needs_abi_v2(e);
        }
        return false;
    }

    bool needs_abi_v2(const ContractDecl& c) const {
        for (const auto& f : c.functions) {
            if (f.visibility == Visibility::internal || f.visibility == Visibility::private_) continue;
            for (const auto& p : f.params)
                if (needs_abi_v2(p.type)) return true;
            for (const auto& r : f.returns)
                if (needs_abi_v2(r)) return true;
        }
        for (const auto& e : c.events)
            for (const auto& p : e.params)
                if (needs_abi_v2(p.type)) return true;
        return false;
    }

    // ---- emission -----------------------------------------------------------

    std::string file_for(const std::vector<const ContractDecl*>& contracts) const {
        std::ostringstream out;
        if (!cfg_.license_header.empty()) {
            std::istringstream in(cfg_.license_header);
            for (std::string line; std::getline(in, line);)
                out << (line.starts_with("//") ? line : line.empty() ? "//" : "// " + line) << "\n";
            out << "\n";
        }
        out << "pragma solidity " << version_text(cfg_.solidity_version) << ";\n";
        if (std::any_of(contracts.begin(), contracts.end(), [&](const ContractDecl* c) { return needs_abi_v2(*c); }))
            out << "pragma experimental ABIEncoderV2;\n";
        if (cfg_.one_file_per_contract) {
            std::set<std::string> imports;
            for (const ContractDecl* c : contracts) {
                for (const auto& p : c->parents) imports.insert(p);
                for (const auto& n : closure(mentioned(*c)))
                    if (m_.find_contract(n) && n != c->name) imports.insert(n);
            }
            if (!imports.empty()) out << "\n";
            for (const auto& i : imports) out << "import \"./" << i << ".sol\";\n";
        }
        for (const ContractDecl* c : contracts) out << "\n" << contract_text(*c);
        return out.str();
    }

    std::string param_text(const Param& p, bool external) const {
        std::string s = sol_type(p.type);
        if (is_reference(p.type)) s += external ? " calldata" : " memory";
        if (!p.name.empty()) s += " " + p.name;
        return s;
    }

    static std::string visibility_word(Visibility v) {
        switch (v) {
        case Visibility::public_: return "public";
        case Visibility::external: return "external";
        case Visibility::internal: return "internal";
        case Visibility::private_: return "private";
        }
        return "public";
    }

    std::string contract_text(const ContractDecl& c) const {
        std::ostringstream out;
        const char* keyword = c.kind == ContractKind::interface          ? "interface"
                              : c.kind == ContractKind::library_contract ? "library"
                                                                         : "contract";
        out << keyword << " " << c.name;
        if (!c.parents.empty()) {
            out << " is ";
            for (std::size_t i = 0; i < c.parents.size(); ++i) out << (i ? ", " : "") << c.parents[i];
        }
        out << " {\n";
        std::vector<std::string> groups;

        const auto types = own_types(c);
        for (const auto& ref : m_.declaration_order) {
            if (ref.kind == DeclKind::structure && types.count(m_.structs.at(ref.index).name)) {
                const StructDecl& s = m_.structs.at(ref.index);
                std::string g = "    struct " + s.name + " {\n";
                for (const auto& f : s.fields) g += "        " + sol_type(f.type) + " " + f.name + ";\n";
                groups.push_back(g + "    }\n");
            } else if (ref.kind == DeclKind::enumeration && types.count(m_.enums.at(ref.index).name)) {
                const EnumDecl& e = m_.enums.at(ref.index);
                std::string g = "    enum " + e.name + " { ";
                for (std::size_t i = 0; i < e.values.size(); ++i) g += (i ? ", " : "") + e.values[i];
                groups.push_back(g + " }\n");
            }
        }

        if (!c.state_vars.empty()) {
            std::string g;
            for (const auto& v : c.state_vars) {
                const Visibility vis = v.visibility == Visibility::external ? Visibility::public_ : v.visibility;
                g += "    " + sol_type(v.type) + (vis == Visibility::internal ? "" : " " + visibility_word(vis)) +
                     " " + v.name + ";\n";
            }
            groups.push_back(g);
        }
        if (!c.events.empty()) {
            std::string g;
            for (const auto& e : c.events) {
                g += "    event " + e.name + "(";
                for (std::size_t i = 0; i < e.params.size(); ++i) {
                    const Param& p = e.params[i];
                    g += (i ? ", " : "") + sol_type(p.type) + (p.name.empty() ? "" : " " + p.name);
                }
                g += ");\n";
            }
            groups.push_back(g);
        }
        for (const auto& m : c.modifiers) {
            std::string g = "    modifier " + m.name + "(";
            for (std::size_t i = 0; i < m.params.size(); ++i) g += (i ? ", " : "") + param_text(m.params[i], false);
            g += ") {\n";
            if (!m.guard.empty()) g += "        // guard: " + comment_text(m.guard) + "\n";
            g += "        require(false, \"TODO\");\n        _;\n    }\n";
            groups.push_back(g);
        }
        for (const auto& f : c.functions) groups.push_back(function_text(c, f));

        for (std::size_t i = 0; i < groups.size(); ++i) out << (i ? "\n" : "") << groups[i];
        out << "}\n";
        return out.str();
    }

    std::string function_text(const ContractDecl& c, const FunctionSig& f) const {
        const bool iface = c.kind == ContractKind::interface;
        const Visibility vis = iface ? Visibility::external : f.visibility;
        const bool external = vis == Visibility::external;
        std::string s = "    function " + f.name + "(";
        for (std::size_t i = 0; i < f.params.size(); ++i) s += (i ? ", " : "") + param_text(f.params[i], external);
        s += ") " + visibility_word(vis);
        if (f.mutability != Mutability::nonpayable) s += " " + std::string(to_string(f.mutability));
        for (const auto& m : f.applied_modifiers) s += " " + m;
        if (!f.returns.empty()) {
            s += " returns (";
            for (std::size_t i = 0; i < f.returns.size(); ++i)
                s += (i ? ", " : "") + sol_type(f.returns[i]) + (is_reference(f.returns[i]) ? " memory" : "");
            s += ")";
        }
        if (iface) return s + ";\n";
        s += " {\n";
        const bool reads_only = f.mutability == Mutability::view || f.mutability == Mutability::pure;
        if (reads_only && !f.returns.empty()) {
            std::string names;
            for (std::size_t i = 0; i < f.returns.size(); ++i) {
                const std::string local = "result" + (f.returns.size() > 1 ? std::to_string(i) : std::string());
                s += "        " + sol_type(f.returns[i]) + (is_reference(f.returns[i]) ? " memory " : " ") + local +
                     ";\n";
                names += (i ? ", " : "") + local;
            }
            s += f.returns.size() > 1 ? "        return (" + names + ");\n" : "        return " + names + ";\n";
        } else if (!reads_only) {
            s += "        revert(\"not implemented\");\n";
        }
        return s + "    }\n";
    }

    const SystemModel& m_;
    const ScaffoldConfig& cfg_;
};

}  // namespace

std::map<std::string, std::string> generate_solidity(const SystemModel& model, const ScaffoldConfig& config) {
    return Generator(model, config).run();
}

}  // namespace abcde
