#pragma once

// AST traversal helpers shared by the lint and gas engines.

#include <set>
#include <string>
#include <vector>

#include "abcde/sol_ast.hpp"

namespace abcde::sol::walk {

/// Pre-order visit of `e` and every sub-expression.
template <class F>
void exprs(const Expr& e, F&& f) {
    f(e);
    for (const auto& c : e.children) exprs(c, f);
    for (const auto& [name, value] : e.options) exprs(value, f);
}

inline bool is_loop(const Stmt& s) {
    return s.kind == StmtKind::for_ || s.kind == StmtKind::while_ || s.kind == StmtKind::do_while;
}

/// Visits every statement with the number of loops enclosing it.
template <class F>
void stmts(const std::vector<Stmt>& body, F&& f, int loops = 0) {
    for (const auto& s : body) {
        f(s, loops);
        stmts(s.init, f, loops);
        stmts(s.body, f, loops + (is_loop(s) ? 1 : 0));
        stmts(s.else_body, f, loops);
    }
}

/// Visits the expressions owned directly by `s` with a flag telling whether
/// they are evaluated on every loop iteration.
template <class F>
void own_exprs(const Stmt& s, int loops, F&& f) {
    const bool in_loop = loops > 0 || is_loop(s);
    if (s.condition) f(*s.condition, in_loop);
    if (s.expr) f(*s.expr, s.kind == StmtKind::for_ ? true : loops > 0);
}

/// Every expression node in `body`, with the in-loop flag.
template <class F>
void all_exprs(const std::vector<Stmt>& body, F&& f) {
    stmts(body, [&](const Stmt& s, int loops) {
        own_exprs(s, loops, [&](const Expr& root, bool in_loop) { exprs(root, [&](const Expr& e) { f(e, in_loop); }); });
    });
}

/// Identifier at the root of a member/index chain (`a.b[c].d` -> `a`).
inline const Expr* root_identifier(const Expr& e) {
    const Expr* cur = &e;
    while (cur->kind == ExprKind::member || cur->kind == ExprKind::index) {
        if (cur->children.empty()) return nullptr;
        cur = &cur->children[0];
    }
    return cur->kind == ExprKind::identifier ? cur : nullptr;
}

inline bool mentions(const Expr& e, const std::set<std::string>& names) {
    bool found = false;
    exprs(e, [&](const Expr& x) {
        if (x.kind == ExprKind::identifier && names.count(x.text)) found = true;
    });
    return found;
}

template <class Pred>
bool any_of(const Expr& e, Pred&& pred) {
    bool found = false;
    exprs(e, [&](const Expr& x) {
        if (!found && pred(x)) found = true;
    });
    return found;
}

/// Names declared in a function or modifier: parameters, returns, locals.
inline std::set<std::string> local_names(const std::vector<Param>& params, const std::vector<Param>& returns,
                                         const std::optional<std::vector<Stmt>>& body) {
    std::set<std::string> out;
    for (const auto& p : params)
        if (!p.name.empty()) out.insert(p.name);
    for (const auto& p : returns)
        if (!p.name.empty()) out.insert(p.name);
    if (body) {
        stmts(*body, [&](const Stmt& s, int) {
            for (const auto& v : s.vars)
                if (!v.name.empty()) out.insert(v.name);
        });
    }
    return out;
}

inline bool is_zero_number(const std::string& text) {
    if (text.empty()) return false;
    std::string digits = text;
    if (digits.starts_with("0x") || digits.starts_with("0X")) digits = digits.substr(2);
    const auto unit = digits.find(' ');
    if (unit != std::string::npos) digits = digits.substr(0, unit);
    if (digits.empty()) return false;
    for (char c : digits)
        if (c != '0' && c != '_' && c != '.') return false;
    return true;
}

/// Literal 0 or false.
inline bool is_zero_literal(const Expr& e) {
    if (e.kind != ExprKind::literal) return false;
    if (e.literal == LiteralKind::number) return is_zero_number(e.text);
    return e.literal == LiteralKind::boolean && e.text == "false";
}

/// The default value of any value type: 0, false, "", or a conversion of 0
/// such as `address(0)`.
inline bool is_default_value(const Expr& e) {
    if (is_zero_literal(e)) return true;
    if (e.kind == ExprKind::literal && e.literal == LiteralKind::string) return e.text.empty();
    return e.kind == ExprKind::call && e.children.size() == 2 && e.children[0].kind == ExprKind::elementary &&
           is_zero_literal(e.children[1]);
}

/// Low-level address members whose boolean result reports failure.
inline bool is_low_level_member(std::string_view name) {
    return name == "call" || name == "callcode" || name == "delegatecall" || name == "send";
}

}  // namespace abcde::sol::walk
