#include "abcde/diagram.hpp"

namespace abcde {

using namespace model;

namespace {

std::string params_text(const std::vector<Param>& params) {
    std::string out;
    for (const auto& p : params) {
        if (!out.empty()) out += ", ";
        out += p.name.empty() ? p.type.to_string() : p.name + ": " + p.type.to_string();
    }
    return out;
}

std::string collection_suffix(const TypeName& t) {
    const Collection c = collection_of(t);
    return c == Collection::scalar ? "" : " <<" + std::string(stereotype_name(c)) + ">>";
}

char glyph(Visibility v) {
    switch (v) {
    case Visibility::public_:
    case Visibility::external: return '+';
    case Visibility::internal: return '#';
    case Visibility::private_: return '-';
    }
    return '+';
}

std::string function_line(const FunctionSig& f) {
    std::string line = "  ";
    line += glyph(f.visibility);
    line += " " + f.name + "(" + params_text(f.params) + ")";
    if (f.returns.size() == 1) {
        line += ": " + f.returns[0].to_string();
    } else if (f.returns.size() > 1) {
        line += ": (";
        for (std::size_t i = 0; i < f.returns.size(); ++i) line += (i ? ", " : "") + f.returns[i].to_string();
        line += ")";
    }
    if (f.mutability != Mutability::nonpayable) line += " {" + std::string(to_string(f.mutability)) + "}";
    return line;
}

/// Innermost named type reached through mapping values and array elements.
const TypeName& target_type(const TypeName& t) {
    if (t.is_mapping()) return target_type(t.value());
    if (t.is_array()) return target_type(t.element());
    return t;
}

/// Label text on one line: newlines escaped.
std::string one_line(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '\n') out += "\\n";
        else if (c == '\r') out += "\\r";
        else out += c;
    }
    return out;
}

}  // namespace

std::string DiagramText::str() const {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

DiagramText class_diagram(const SystemModel& model) {
    DiagramText d;
    auto& out = d.lines;
    for (const auto& ref : model.declaration_order) {
        switch (ref.kind) {
        case DeclKind::contract: {
            const ContractDecl& c = model.contracts.at(ref.index);
            out.push_back("class " + c.name + " <<" + std::string(stereotype_name(c.kind)) + ">>");
            for (const auto& v : c.state_vars)
                out.push_back("  " + v.name + ": " + v.type.to_string() + collection_suffix(v.type));
            for (const auto& e : c.events) out.push_back("  event " + e.name + "(" + params_text(e.params) + ") <<event>>");
            if (!c.modifiers.empty() || !c.functions.empty()) out.push_back("  --");
            for (const auto& m : c.modifiers)
                out.push_back("  modifier " + m.name + "(" + params_text(m.params) + ") <<modifier>>");
            for (const auto& f : c.functions) out.push_back(function_line(f));
            break;
        }
        case DeclKind::structure: {
            const StructDecl& s = model.structs.at(ref.index);
            out.push_back("class " + s.name + " <<struct>>");
            for (const auto& f : s.fields)
                out.push_back("  " + f.name + ": " + f.type.to_string() + collection_suffix(f.type));
            break;
        }
        case DeclKind::enumeration: {
            const EnumDecl& e = model.enums.at(ref.index);
            out.push_back("class " + e.name + " <<enum>>");
            for (const auto& v : e.values) out.push_back("  " + v);
            break;
        }
        }
        out.push_back("end");
    }
    auto is_named = [&](const TypeName& t) {
        return t.kind == TypeName::Kind::user_defined &&
               (model.find_contract(t.name) || model.find_struct(t.name) || model.find_enum(t.name));
    };
    for (const auto& ref : model.declaration_order) {
        if (ref.kind == DeclKind::contract) {
            const ContractDecl& c = model.contracts.at(ref.index);
            for (const auto& p : c.parents) out.push_back(c.name + " --|> " + p);
            for (const auto& v : c.state_vars) {
                const TypeName& t = target_type(v.type);
                if (is_named(t)) out.push_back(c.name + " --> " + t.name + " : " + v.name + collection_suffix(v.type));
            }
        } else if (ref.kind == DeclKind::structure) {
            const StructDecl& s = model.structs.at(ref.index);
            for (const auto& f : s.fields) {
                const TypeName& t = target_type(f.type);
                if (is_named(t)) out.push_back(s.name + " --> " + t.name + " : " + f.name + collection_suffix(f.type));
            }
        }
    }
    return d;
}

DiagramText sequence_diagram(const Scenario& scenario) {
    DiagramText d;
    for (const auto& p : scenario.participants)
        d.lines.push_back("participant " + p.alias + " <<" + std::string(stereotype_name(p.kind)) + ">>");
    for (const auto& m : scenario.messages) {
        const std::string label = one_line(m.label);
        switch (m.kind) {
        case MessageKind::ether_transfer:
            d.lines.push_back(m.from + " --> " + m.to + " : " + label + " <<ethers>>");
            break;
        case MessageKind::creation:
            d.lines.push_back(m.from + " -> " + m.to + " ** : create" + (label.empty() ? "" : " " + label));
            break;
        default:
            d.lines.push_back(m.from + " -> " + m.to + " : " + label + " <<" + std::string(tag_name(m.kind)) + ">>");
        }
    }
    return d;
}

}  // namespace abcde
