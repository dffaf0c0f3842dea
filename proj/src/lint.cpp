#include "abcde/lint.hpp"

#include <stdexcept>

#include "abcde/catalog.hpp"
#include "sol_scope.hpp"
#include "sol_walk.hpp"

namespace abcde {

using namespace sol;

namespace {

const std::set<std::string> kBuiltins = {"require", "assert", "revert", "msg", "block", "tx", "now", "selfdestruct"};
const std::set<std::string> kAddressMembers = {"transfer", "send",         "balance",    "call",
                                               "callcode", "delegatecall", "staticcall", "code",
                                               "codehash"};

bool is_comparison(const Expr& e) {
    if (e.kind != ExprKind::binary) return false;
    const auto& op = e.text;
    return op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" || op == ">=";
}

/// `.transfer(x)`, `.send(x)`, or any call carrying a value.
bool is_ether_transfer(const Expr& e) {
    if (e.kind != ExprKind::call) return false;
    for (const auto& [name, value] : e.options)
        if (name == "value") return true;
    const Expr& head = e.children.at(0);
    if (head.kind == ExprKind::call && !head.children.empty() && head.children[0].kind == ExprKind::member &&
        head.children[0].text == "value")
        return true;
    const Expr& callee = e.callee();
    return callee.kind == ExprKind::member && (callee.text == "transfer" || callee.text == "send") &&
           e.children.size() == 2;
}

bool overflow_applies(const SourceUnit& unit) {
    if (!unit.pragma || !unit.pragma->min_version) return true;
    const auto& v = *unit.pragma->min_version;
    return v[0] == 0 && v[1] < 8;
}

class Linter {
public:
    explicit Linter(const SourceUnit& unit) : unit_(unit), check_overflow_(overflow_applies(unit)) {}

    std::vector<Diagnostic> run() {
        check_pragma();
        for (const auto& c : unit_.contracts) check_contract(c);
        emit_manual("CL-FIXWARN");
        emit_manual("CL-COVERAGE");
        return std::move(out_);
    }

private:
    void emit(std::string_view rule, const SourceSpan& span, std::string message, std::string path = {}) {
        Diagnostic d = make_diagnostic(rule, std::move(message));
        d.span = span;
        d.path = std::move(path);
        out_.push_back(std::move(d));
    }

    void emit_manual(std::string_view rule) { out_.push_back(make_diagnostic(rule, std::string(find_rule(rule)->summary))); }

    void check_pragma() {
        if (!unit_.pragma) {
            emit("CL-PRAGMA", SourceSpan{unit_.file, 1, 1, 0}, "no `pragma solidity` directive; pin an exact compiler version");
        } else if (!unit_.pragma->locked) {
            emit("CL-PRAGMA", unit_.pragma->span,
                 "compiler version '" + unit_.pragma->raw + "' is not locked; pin an exact version");
        }
    }

    void check_shadow(const std::string& name, const SourceSpan& span, std::string_view what, const std::string& path) {
        if (kBuiltins.count(name))
            emit("CL-SHADOW", span, std::string(what) + " '" + name + "' shadows a built-in", path);
    }

    void check_contract(const ContractDef& c) {
        ContractScope scope(c, unit_);
        for (const auto& v : c.state_vars) {
            check_shadow(v.name, v.span, "state variable", c.name);
            if (v.initializer) {
                LocalScope none(scope);
                check_expr_rules(*v.initializer, none, c.name + "." + v.name);
            }
        }
        for (const auto& e : c.events) check_shadow(e.name, e.span, "event", c.name);
        for (const auto& m : c.modifiers) {
            const std::string path = c.name + "." + m.name;
            check_shadow(m.name, m.span, "modifier", path);
            for (const auto& p : m.params) check_shadow(p.name, p.span, "parameter", path);
            if (!m.body) continue;
            LocalScope local(scope, m.params, {}, m.body);
            check_body(*m.body, local, path);
        }
        for (const auto& f : c.functions) check_function(f, scope);
    }

    void check_function(const FuncDef& f, const ContractScope& scope) {
        const std::string path = scope.contract().name + "." + (f.name.empty() ? "<fallback>" : f.name);
        if (!f.name.empty()) check_shadow(f.name, f.span, "function", path);
        for (const auto& p : f.params) check_shadow(p.name, p.span, "parameter", path);
        for (const auto& p : f.returns) check_shadow(p.name, p.span, "return variable", path);
        if (!f.body) return;
        LocalScope local(scope, f.params, f.returns, f.body);
        walk::stmts(*f.body, [&](const Stmt& s, int) {
            for (const auto& v : s.vars) check_shadow(v.name, v.span, "local variable", path);
        });
        check_body(*f.body, local, path);
        check_multisend(*f.body, path);
        check_validate(f, local, path);
        check_rawaddr(f, *f.body, path);
        if (f.is_fallback) check_fallback(f, path);
    }

    void check_body(const std::vector<Stmt>& body, const LocalScope& local, const std::string& path) {
        walk::stmts(body, [&](const Stmt& s, int) {
            if (s.kind == StmtKind::expr && s.expr && s.expr->kind == ExprKind::call) {
                const Expr& callee = s.expr->callee();
                if (callee.kind == ExprKind::member && walk::is_low_level_member(callee.text))
                    emit("CL-LOWLEVEL", s.expr->span,
                         "return value of `." + callee.text + "` is ignored; check it and handle failure", path);
            }
            if (walk::is_loop(s) && s.condition) check_unbounded(s, local, path);
            walk::own_exprs(s, 0, [&](const Expr& root, bool) { check_expr_rules(root, local, path); });
        });
    }

    void check_unbounded(const Stmt& loop, const LocalScope& local, const std::string& path) {
        bool unbounded = false;
        std::string what;
        walk::exprs(*loop.condition, [&](const Expr& e) {
            if (unbounded) return;
            if (e.kind == ExprKind::member && e.text == "length" && !e.children[0].is_member_of("msg", "data")) {
                auto t = local.type_of(e.children[0]);
                const bool fixed = t && t->is_array() && !t->is_dynamic_array();
                if (!fixed) {
                    unbounded = true;
                    what = "a dynamic length";
                }
            } else if (e.kind == ExprKind::identifier) {
                const VarDecl* v = local.state_var(e.text);
                if (v && !v->is_constant && !v->is_immutable) {
                    unbounded = true;
                    what = "state variable '" + e.text + "'";
                }
            }
        });
        if (unbounded)
            emit("CL-UNBOUNDED", loop.span, "loop bound depends on " + what + "; iteration count can exceed the block gas limit",
                 path);
    }

    void check_txorigin(const Expr& e, bool guarded, const std::string& path) {
        if (e.is_member_of("tx", "origin")) {
            if (guarded) emit("CL-TXORIGIN", e.span, "`tx.origin` used for authorization; use `msg.sender`", path);
            return;
        }
        const bool inner = guarded || is_comparison(e) ||
                           (e.kind == ExprKind::call && (e.call_name() == "require" || e.call_name() == "assert"));
        for (const auto& c : e.children) check_txorigin(c, inner, path);
        for (const auto& [n, v] : e.options) check_txorigin(v, inner, path);
    }

    void check_expr_rules(const Expr& root, const LocalScope& local, const std::string& path) {
        check_txorigin(root, false, path);
        walk::exprs(root, [&](const Expr& e) {
            if (e.is_member_of("block", "timestamp") || (e.is_identifier("now") && !local.is_local("now") &&
                                                         !local.state_var("now")))
                emit("CL-TIMESTAMP", e.span, "block timestamp can be skewed by miners; do not use it for exact timing",
                     path);
            if (is_comparison(e) && walk::any_of(e, [](const Expr& x) { return x.is_member_of("block", "number"); }) &&
                walk::any_of(e, [](const Expr& x) {
                    return x.kind == ExprKind::literal && x.literal == LiteralKind::number;
                }))
                emit("CL-BLOCKNUM", e.span, "`block.number` compared against a fixed block count used as a clock",
                     path);
            if (e.kind == ExprKind::call && e.call_name() == "assert" && e.children.size() > 1) {
                const bool input = walk::any_of(e, [&](const Expr& x) {
                    return (x.kind == ExprKind::member && !x.children.empty() && x.children[0].is_identifier("msg")) ||
                           (x.kind == ExprKind::identifier && local.is_param(x.text));
                });
                if (input)
                    emit("CL-ASSERTUSE", e.span, "`assert` checks caller input; use `require` for input validation",
                         path);
            }
            check_arithmetic(e, local, path);
        });
    }

    void check_arithmetic(const Expr& e, const LocalScope& local, const std::string& path) {
        std::string op;
        if (e.kind == ExprKind::binary) op = e.text;
        else if (e.kind == ExprKind::assignment && e.text != "=") op = e.text.substr(0, e.text.size() - 1);
        else return;
        if (op != "+" && op != "-" && op != "*" && op != "**" && op != "/") return;
        bool lit_l = false, lit_r = false;
        auto l = local.type_of(e.children.at(0), &lit_l);
        auto r = local.type_of(e.children.at(1), &lit_r);
        if (lit_l && lit_r) return;
        const bool ints = l && r &&
                          is_integer(*l) && is_integer(*r);
        if (op == "/") {
            if ((l && !is_integer(*l)) || (r && !is_integer(*r))) return;
            emit("CL-DIV", e.span, "integer division rounds down; multiply before dividing", path);
            return;
        }
        if (!check_overflow_ || !ints) return;
        const TypeName& t = lit_l ? *r : *l;
        if (local.contract().has_safe_math_for(t) || local.contract().is_safe_math_library()) return;
        emit("CL-OVERFLOW", e.span,
             "unchecked `" + e.text + "` on " + t.to_string() + "; use a checked-math library such as SafeMath", path);
    }

    void check_multisend(const std::vector<Stmt>& body, const std::string& path) {
        int count = 0;
        bool reported = false;
        walk::all_exprs(body, [&](const Expr& e, bool in_loop) {
            if (reported || !is_ether_transfer(e)) return;
            count += in_loop ? 2 : 1;
            if (count >= 2) {
                reported = true;
                emit("CL-MULTISEND", e.span,
                     in_loop && count == 2 ? "ether transfer inside a loop sends several payments in one transaction"
                                           : "several ether transfers in one function; one failure blocks them all",
                     path);
            }
        });
    }

    void check_validate(const FuncDef& f, const LocalScope& local, const std::string& path) {
        if (!f.is_public_facing() || f.is_constructor || f.is_fallback || f.is_receive) return;
        const auto& params = local.param_names();
        if (params.empty()) return;
        for (const auto& inv : f.modifiers)
            for (const auto& a : inv.args)
                if (walk::mentions(a, params)) return;
        bool validated = false;
        walk::stmts(*f.body, [&](const Stmt& s, int) {
            if (validated) return;
            if (s.kind == StmtKind::if_ && s.condition && walk::mentions(*s.condition, params)) {
                bool reverts = false;
                walk::all_exprs(s.body, [&](const Expr& e, bool) {
                    if (e.kind == ExprKind::call && e.call_name() == "revert") reverts = true;
                });
                if (reverts) validated = true;
            }
            walk::own_exprs(s, 0, [&](const Expr& root, bool) {
                walk::exprs(root, [&](const Expr& e) {
                    if (e.kind == ExprKind::call && e.call_name() == "require" && walk::mentions(e, params))
                        validated = true;
                });
            });
        });
        if (!validated)
            emit("CL-VALIDATE", f.span, "'" + f.name + "' takes arguments but no `require` checks them", path);
    }

    void check_rawaddr(const FuncDef& f, const std::vector<Stmt>& body, const std::string& path) {
        std::set<std::string> addrs;
        for (const auto& p : f.params)
            if (!p.name.empty() && is_address(p.type))
                addrs.insert(p.name);
        if (addrs.empty()) return;
        std::set<std::string> reported;
        walk::all_exprs(body, [&](const Expr& e, bool) {
            if (e.kind != ExprKind::call) return;
            const Expr& callee = e.callee();
            if (callee.kind != ExprKind::member) return;
            const Expr& obj = callee.children.at(0);
            std::string param;
            if (obj.kind == ExprKind::identifier && addrs.count(obj.text) && !kAddressMembers.count(callee.text)) {
                param = obj.text;
            } else if (obj.kind == ExprKind::call && obj.children.size() == 2 &&
                       obj.children[0].kind == ExprKind::identifier && obj.children[1].kind == ExprKind::identifier &&
                       addrs.count(obj.children[1].text)) {
                param = obj.children[1].text;
            }
            if (param.empty() || !reported.insert(param).second) return;
            emit("CL-RAWADDR", e.span,
                 "parameter '" + param + "' is a raw address used as a contract; declare it with the interface type",
                 path);
        });
    }

    void check_fallback(const FuncDef& f, const std::string& path) {
        const auto& body = *f.body;
        if (body.size() > 3) {
            emit("CL-FALLBACK", f.span, "fallback function has " + std::to_string(body.size()) + " statements; keep it simple",
                 path);
            return;
        }
        const bool logic = std::any_of(body.begin(), body.end(), [](const Stmt& s) { return s.kind != StmtKind::emit; });
        if (!logic) return;
        bool checks_data = false;
        walk::all_exprs(body, [&](const Expr& e, bool) {
            if (e.is_member_of("msg", "data")) checks_data = true;
        });
        if (!checks_data)
            emit("CL-FALLBACK", f.span, "fallback function runs logic without checking that `msg.data` is empty", path);
    }

    const SourceUnit& unit_;
    bool check_overflow_;
    std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> lint(const SourceUnit& unit, const LintConfig& config) {
    if (auto unknown = config.unknown_rules(); !unknown.empty())
        throw std::invalid_argument("unknown rule id '" + unknown.front() + "'");
    auto diags = Linter(unit).run();
    finalize(diags, unit, config);
    return diags;
}

}  // namespace abcde
