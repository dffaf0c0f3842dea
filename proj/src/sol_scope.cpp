#include "sol_scope.hpp"

#include <algorithm>
#include <cctype>

#include "abcde/storage_layout.hpp"
#include "sol_walk.hpp"

namespace abcde::sol {

ContractScope::ContractScope(const ContractDef& contract, const SourceUnit& unit) : contract_(contract), unit_(unit) {
    try {
        chain_ = linearized_contracts(contract, unit);
    } catch (const std::exception&) {
        chain_ = {&contract};
    }
    for (const ContractDef* c : chain_)
        for (const auto& v : c->state_vars) state_.emplace(v.name, &v);  // most-derived wins
}

const VarDecl* ContractScope::state_var(const std::string& name) const {
    auto it = state_.find(name);
    return it == state_.end() ? nullptr : it->second;
}

const StructDef* ContractScope::find_struct(const std::string& name) const {
    const auto dot = name.find('.');
    const std::string bare = dot == std::string::npos ? name : name.substr(dot + 1);
    for (const ContractDef* c : chain_)
        for (const auto& s : c->structs)
            if (s.name == bare) return &s;
    for (const auto& c : unit_.contracts)
        for (const auto& s : c.structs)
            if (s.name == bare) return &s;
    for (const auto& s : unit_.structs)
        if (s.name == bare) return &s;
    return nullptr;
}

const FuncDef* ContractScope::find_function(const std::string& name) const {
    for (const ContractDef* c : chain_)
        for (const auto& f : c->functions)
            if (f.name == name) return &f;
    return nullptr;
}

bool ContractScope::is_contract_name(const std::string& name) const { return unit_.find_contract(name) != nullptr; }

namespace {

bool looks_like_math_library(const std::string& name, const ContractDef* def) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (lower.find("math") != std::string::npos) return true;
    if (def)
        for (const auto& f : def->functions)
            if (f.name == "add" || f.name == "sub" || f.name == "mul") return true;
    return false;
}

}  // namespace

bool ContractScope::has_safe_math_for(const TypeName& t) const {
    for (const ContractDef* c : chain_)
        for (const auto& u : c->using_declarations)
            if (looks_like_math_library(u.library, unit_.find_contract(u.library)) &&
                (!u.target || u.target->to_string() == t.to_string()))
                return true;
    return false;
}

bool ContractScope::is_safe_math_library() const {
    return contract_.kind == ContractKind::library && looks_like_math_library(contract_.name, &contract_);
}

LocalScope::LocalScope(const ContractScope& contract) : contract_(contract) {}

LocalScope::LocalScope(const ContractScope& contract, const std::vector<Param>& params,
                       const std::vector<Param>& returns, const std::optional<std::vector<Stmt>>& body)
    : contract_(contract) {
    for (const auto& p : params) {
        if (p.name.empty()) continue;
        params_.emplace(p.name, p.type);
        param_names_.insert(p.name);
        locals_.emplace(p.name, p.type);
    }
    for (const auto& p : returns)
        if (!p.name.empty()) locals_.emplace(p.name, p.type);
    if (body) {
        walk::stmts(*body, [&](const Stmt& s, int) {
            for (const auto& v : s.vars)
                if (!v.name.empty()) locals_.emplace(v.name, v.type);
        });
    }
}

const VarDecl* LocalScope::state_var(const std::string& name) const {
    if (locals_.count(name)) return nullptr;
    return contract_.state_var(name);
}

bool LocalScope::is_storage_ref(const Expr& e) const {
    const Expr* root = walk::root_identifier(e);
    if (!root) return false;
    const VarDecl* v = state_var(root->text);
    return v && !v->is_constant && !v->is_immutable;
}

std::optional<TypeName> LocalScope::type_of(const Expr& e, bool* literal) const {
    if (literal) *literal = false;
    switch (e.kind) {
    case ExprKind::literal:
        if (e.literal == LiteralKind::number) {
            if (literal) *literal = true;
            return TypeName::elementary("uint256");
        }
        if (e.literal == LiteralKind::boolean) return TypeName::elementary("bool");
        return std::nullopt;
    case ExprKind::identifier: {
        if (auto it = locals_.find(e.text); it != locals_.end()) return it->second;
        if (const VarDecl* v = contract_.state_var(e.text)) return v->type_name;
        if (e.text == "now") return TypeName::elementary("uint256");
        return std::nullopt;
    }
    case ExprKind::index: {
        auto base = type_of(e.children.at(0));
        if (!base) return std::nullopt;
        if (base->is_mapping()) return base->value();
        if (base->is_array()) return base->element();
        if (base->kind == TypeName::Kind::elementary && base->name.starts_with("bytes"))
            return TypeName::elementary("bytes1");
        return std::nullopt;
    }
    case ExprKind::member: {
        const Expr& obj = e.children.at(0);
        if (e.text == "length") return TypeName::elementary("uint256");
        if (obj.is_identifier("msg") && e.text == "value") return TypeName::elementary("uint256");
        if (obj.is_identifier("msg") && e.text == "sender") return TypeName::elementary("address");
        if (obj.is_identifier("block") && (e.text == "timestamp" || e.text == "number"))
            return TypeName::elementary("uint256");
        if (e.text == "balance") return TypeName::elementary("uint256");
        auto base = type_of(obj);
        if (!base || base->kind != TypeName::Kind::user_defined) return std::nullopt;
        if (const StructDef* s = contract_.find_struct(base->name))
            for (const auto& m : s->members)
                if (m.name == e.text) return m.type;
        return std::nullopt;
    }
    case ExprKind::call: {
        const Expr& callee = e.callee();
        if (callee.kind == ExprKind::elementary) return TypeName::elementary(callee.text);
        if (callee.kind == ExprKind::identifier) {
            if (const FuncDef* f = contract_.find_function(callee.text); f && f->returns.size() == 1)
                return f->returns[0].type;
        }
        return std::nullopt;
    }
    case ExprKind::binary: {
        const std::string& op = e.text;
        if (op == "+" || op == "-" || op == "*" || op == "/" || op == "%" || op == "**" || op == "&" || op == "|" ||
            op == "^" || op == "<<" || op == ">>") {
            bool lit_l = false, lit_r = false;
            auto l = type_of(e.children.at(0), &lit_l);
            auto r = type_of(e.children.at(1), &lit_r);
            if (literal) *literal = lit_l && lit_r;
            if (lit_l && r) return r;
            return l ? l : r;
        }
        return TypeName::elementary("bool");
    }
    case ExprKind::unary:
        if (e.text == "!") return TypeName::elementary("bool");
        return type_of(e.children.at(0), literal);
    case ExprKind::assignment: return type_of(e.children.at(0));
    case ExprKind::conditional: return type_of(e.children.at(1));
    default: return std::nullopt;
    }
}

}  // namespace abcde::sol
