#include <sstream>

#include "abcde/dsl.hpp"

namespace abcde::dsl {

using namespace abcde::model;

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out + "\"";
}

std::string params(const std::vector<Param>& ps) {
    std::string out = "(";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i) out += ", ";
        out += ps[i].name + ": " + ps[i].type.to_string();
    }
    return out + ")";
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
    return out;
}

std::string fnsig(const FunctionSig& f) {
    std::string out = f.name + params(f.params) + " " + std::string(to_string(f.visibility));
    if (f.mutability != Mutability::nonpayable) out += " " + std::string(to_string(f.mutability));
    if (!f.applied_modifiers.empty()) out += " uses(" + join(f.applied_modifiers) + ")";
    if (!f.returns.empty()) {
        std::vector<std::string> rs;
        for (const auto& r : f.returns) rs.push_back(r.to_string());
        out += " returns(" + join(rs) + ")";
    }
    return out;
}

void write_contract(std::ostream& os, const ContractDecl& c) {
    const char* keyword = c.kind == ContractKind::interface ? "interface"
                          : c.kind == ContractKind::library_contract ? "library"
                                                                     : "contract";
    os << "    " << keyword << ' ' << c.name;
    if (c.kind == ContractKind::contract) {
        if (!c.parents.empty()) os << " is " << join(c.parents);
        if (!c.pattern_tags.empty()) {
            std::vector<std::string> tags;
            for (auto p : c.pattern_tags) tags.emplace_back(to_string(p));
            os << " @pattern(" << join(tags) << ')';
        }
    }
    os << " {\n";
    const bool bare_functions = c.kind != ContractKind::contract && c.state_vars.empty() && c.events.empty() &&
                                c.modifiers.empty();
    if (bare_functions) {
        for (const auto& f : c.functions) os << "        " << fnsig(f) << '\n';
        os << "    }\n";
        return;
    }
    if (!c.state_vars.empty()) {
        os << "        state {\n";
        for (const auto& v : c.state_vars)
            os << "            " << v.name << ": " << v.type.to_string() << ' ' << to_string(v.visibility) << '\n';
        os << "        }\n";
    }
    if (!c.events.empty()) {
        os << "        events {\n";
        for (const auto& e : c.events) os << "            " << e.name << params(e.params) << '\n';
        os << "        }\n";
    }
    if (!c.modifiers.empty()) {
        os << "        modifiers {\n";
        for (const auto& m : c.modifiers) {
            os << "            " << m.name;
            if (!m.params.empty()) os << params(m.params);
            if (!m.guard.empty()) os << ' ' << quote(m.guard);
            os << ";\n";
        }
        os << "        }\n";
    }
    if (!c.functions.empty()) {
        os << "        functions {\n";
        for (const auto& f : c.functions) os << "            " << fnsig(f) << '\n';
        os << "        }\n";
    }
    os << "    }\n";
}

}  // namespace

std::string format_model(const SystemModel& model) {
    std::ostringstream os;
    os << "system " << model.name << " {\n";
    bool need_gap = false;
    auto gap = [&] {
        if (need_gap) os << '\n';
        need_gap = true;
    };
    if (!model.goal.empty()) {
        gap();
        os << "    goal " << quote(model.goal) << '\n';
    }
    if (!model.actors.empty()) {
        gap();
        for (const auto& a : model.actors) os << "    actor " << a.name << " : " << to_string(a.kind) << '\n';
    }
    for (const auto& ref : model.declaration_order) {
        gap();
        switch (ref.kind) {
        case DeclKind::contract: write_contract(os, model.contracts.at(ref.index)); break;
        case DeclKind::structure: {
            const auto& s = model.structs.at(ref.index);
            os << "    struct " << s.name << " {\n";
            for (const auto& f : s.fields) os << "        " << f.name << ": " << f.type.to_string() << '\n';
            os << "    }\n";
            break;
        }
        case DeclKind::enumeration: {
            const auto& e = model.enums.at(ref.index);
            os << "    enum " << e.name << " { " << join(e.values) << " }\n";
            break;
        }
        }
    }
    for (const auto& sc : model.scenarios) {
        gap();
        os << "    scenario " << sc.name << " {\n";
        for (const auto& p : sc.participants) {
            os << "        participant " << p.alias << " : ";
            if (p.contract) os << "contract " << *p.contract;
            else os << to_string(p.kind);
            os << '\n';
        }
        for (const auto& m : sc.messages)
            os << "        " << m.from << (m.dashed ? " --> " : " -> ") << m.to << " : " << quote(m.label) << " ["
               << tag_name(m.kind) << "]\n";
        os << "    }\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace abcde::dsl
