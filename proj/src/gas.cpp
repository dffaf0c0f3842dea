#include "abcde/gas.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "abcde/catalog.hpp"
#include "sol_scope.hpp"
#include "sol_walk.hpp"

namespace abcde {

using namespace sol;

namespace {

constexpr std::size_t kExactSearchLimit = 8;

struct Item {
    std::size_t index;  // position among the contract's slot-taking variables
    std::uint32_t size;
};

bool takes_slot(const VarDecl& v) { return !v.is_constant && !v.is_immutable; }

/// Slots opened by laying out `sizes` one after another, starting with
/// `free` bytes left in an already open slot.
std::uint64_t next_fit(const std::vector<std::uint32_t>& sizes, std::uint32_t free) {
    std::uint64_t slots = 0;
    std::uint32_t left = free;
    for (auto s : sizes) {
        if (s > left) {
            ++slots;
            left = 32;
        }
        left -= s;
    }
    return slots;
}

/// First-fit decreasing; ties keep declaration order. The first bin is the
/// inherited tail slot when it has room.
std::vector<std::size_t> first_fit_decreasing(std::vector<Item> items, std::uint32_t free) {
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.size > b.size; });
    struct Bin {
        std::uint32_t used;
        std::vector<std::size_t> members;
    };
    std::vector<Bin> bins;
    if (free > 0) bins.push_back({32 - free, {}});
    for (const auto& it : items) {
        auto bin = std::find_if(bins.begin(), bins.end(), [&](const Bin& b) { return b.used + it.size <= 32; });
        if (bin == bins.end()) {
            bins.push_back({0, {}});
            bin = bins.end() - 1;
        }
        bin->used += it.size;
        bin->members.push_back(it.index);
    }
    std::vector<std::size_t> order;
    for (const auto& b : bins) order.insert(order.end(), b.members.begin(), b.members.end());
    return order;
}

/// Best next-fit sequence over all distinct size permutations.
std::vector<std::size_t> exact_order(std::vector<Item> items, std::uint32_t free) {
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.size < b.size; });
    std::vector<std::uint32_t> sizes;
    for (const auto& it : items) sizes.push_back(it.size);
    std::vector<std::uint32_t> best = sizes;
    std::uint64_t best_slots = next_fit(sizes, free);
    while (std::next_permutation(sizes.begin(), sizes.end())) {
        const auto slots = next_fit(sizes, free);
        if (slots < best_slots) {
            best_slots = slots;
            best = sizes;
        }
    }
    // Hand out variables of equal size in declaration order.
    std::map<std::uint32_t, std::vector<std::size_t>> by_size;
    std::vector<Item> decl = items;
    std::sort(decl.begin(), decl.end(), [](const Item& a, const Item& b) { return a.index < b.index; });
    for (const auto& it : decl) by_size[it.size].push_back(it.index);
    std::map<std::uint32_t, std::size_t> taken;
    std::vector<std::size_t> order;
    for (auto s : best) order.push_back(by_size[s][taken[s]++]);
    return order;
}

}  // namespace

PackingSuggestion suggest_packing(const ContractDef& contract, const SourceUnit& unit) {
    PackingSuggestion out;
    out.contract = contract.name;
    const StorageLayout current = storage_layout(contract, unit);
    out.current_slots = current.total_slots;

    std::vector<const VarDecl*> own;
    for (const auto& v : contract.state_vars)
        if (takes_slot(v)) own.push_back(&v);

    std::uint32_t free = 0;
    for (const auto& e : current.entries)
        if (e.contract != contract.name) free = 32 - std::min<std::uint32_t>(32, e.offset + e.size);

    std::vector<Item> packable;
    std::vector<std::size_t> fixed;
    for (std::size_t i = 0; i < own.size(); ++i) {
        const StorageSize sz = storage_size(own[i]->type_name, contract, unit);
        if (sz.packable) packable.push_back({i, sz.bytes});
        else fixed.push_back(i);
    }

    auto names = [&](const std::vector<std::size_t>& idx) {
        std::vector<std::string> n;
        for (auto i : idx) n.push_back(own[i]->name);
        return n;
    };
    auto packed_first = [&](std::vector<std::size_t> order) {
        order.insert(order.end(), fixed.begin(), fixed.end());
        return order;
    };
    auto fixed_first = [&](const std::vector<std::size_t>& order) {
        std::vector<std::size_t> all = fixed;
        all.insert(all.end(), order.begin(), order.end());
        return all;
    };

    std::vector<std::vector<std::size_t>> candidates;
    candidates.push_back(packed_first(first_fit_decreasing(packable, free)));
    if (packable.size() <= kExactSearchLimit) {
        candidates.push_back(packed_first(exact_order(packable, free)));
        if (!fixed.empty() && free > 0) candidates.push_back(fixed_first(exact_order(packable, 0)));
    }

    std::vector<std::size_t> original(own.size());
    std::iota(original.begin(), original.end(), 0);
    std::vector<std::size_t> best = original;
    std::uint64_t best_slots = current.total_slots;
    for (const auto& cand : candidates) {
        const auto slots = storage_layout(contract, unit, names(cand)).total_slots;
        if (slots < best_slots) {
            best_slots = slots;
            best = cand;
        }
    }
    out.achievable_slots = best_slots;
    out.full_order = names(best);
    for (auto i : best)
        if (std::any_of(packable.begin(), packable.end(), [&](const Item& it) { return it.index == i; }))
            out.suggested_order.push_back(own[i]->name);
    return out;
}

namespace {

class GasAnalyzer {
public:
    explicit GasAnalyzer(const SourceUnit& unit) : unit_(unit) {}

    std::vector<Diagnostic> run() {
        collect_references();
        for (const auto& c : unit_.contracts) check_contract(c);
        for (std::string_view id : {"GA-SIZE", "GA-USELIB", "GA-EVENTLOG"})
            out_.push_back(make_diagnostic(id, std::string(find_rule(id)->summary)));
        return std::move(out_);
    }

private:
    void emit(std::string_view rule, const SourceSpan& span, std::string message, std::string path) {
        Diagnostic d = make_diagnostic(rule, std::move(message));
        d.span = span;
        d.path = std::move(path);
        out_.push_back(std::move(d));
    }

    template <class F>
    void for_each_expr_in_unit(F&& f) {
        for (const auto& c : unit_.contracts) {
            for (const auto& v : c.state_vars)
                if (v.initializer) walk::exprs(*v.initializer, f);
            for (const auto& m : c.modifiers)
                if (m.body) walk::all_exprs(*m.body, [&](const Expr& e, bool) { f(e); });
            for (const auto& fn : c.functions) {
                for (const auto& inv : fn.modifiers)
                    for (const auto& a : inv.args) walk::exprs(a, f);
                if (fn.body) walk::all_exprs(*fn.body, [&](const Expr& e, bool) { f(e); });
            }
        }
    }

    // Names a function can be reached by from inside the unit without an
    // external call: bare identifiers and `super.f` / `Base.f`.
    void collect_references() {
        for_each_expr_in_unit([&](const Expr& e) {
            if (e.kind == ExprKind::identifier) referenced_.insert(e.text);
            if (e.kind == ExprKind::member && !e.children.empty() && e.children[0].kind == ExprKind::identifier &&
                (e.children[0].text == "super" || unit_.find_contract(e.children[0].text)))
                referenced_.insert(e.text);
        });
    }

    void check_contract(const ContractDef& c) {
        ContractScope scope(c, unit_);
        check_packing(c);
        for (const auto& v : c.state_vars) {
            const std::string path = c.name + "." + v.name;
            if (v.initializer && !v.is_constant && !v.is_immutable && walk::is_default_value(*v.initializer))
                emit("GA-INIT", v.span, "'" + v.name + "' is explicitly initialized to its default value", path);
            if (!v.is_constant && v.type_name.is_dynamic_array())
                emit("GA-ARRAY", v.span, "dynamic array '" + v.name + "'; an integer-keyed mapping is cheaper", path);
        }
        check_bytes32(c, scope);
        for (const auto& m : c.modifiers) {
            if (!m.body) continue;
            LocalScope local(scope, m.params, {}, m.body);
            check_body(*m.body, local, c.name + "." + m.name);
            check_modifier_inlining(c, m);
        }
        for (const auto& f : c.functions) {
            const std::string path = c.name + "." + (f.name.empty() ? "<fallback>" : f.name);
            if (!f.body) continue;
            LocalScope local(scope, f.params, f.returns, f.body);
            check_body(*f.body, local, path);
            if (f.visibility == Visibility::public_ && c.kind == ContractKind::contract && !f.is_constructor &&
                !f.is_fallback && !f.is_receive && !f.name.empty() && !referenced_.count(f.name))
                emit("GA-PUBEXT", f.span, "'" + f.name + "' is never called internally; declare it external", path);
        }
    }

    void check_packing(const ContractDef& c) {
        if (c.kind != ContractKind::contract) return;
        PackingSuggestion p;
        try {
            p = suggest_packing(c, unit_);
        } catch (const std::exception&) {
            return;  // unresolvable layout: nothing to suggest
        }
        if (p.achievable_slots >= p.current_slots) return;
        std::string order;
        for (const auto& n : p.suggested_order) order += (order.empty() ? "" : ", ") + n;
        emit("GA-PACK", c.span,
             "state variables use " + std::to_string(p.current_slots) + " slots; declaring them as [" + order +
                 "] needs " + std::to_string(p.achievable_slots),
             c.name);
    }

    void check_body(const std::vector<Stmt>& body, const LocalScope& local, const std::string& path) {
        walk::stmts(body, [&](const Stmt& s, int loops) {
            if (s.kind == StmtKind::local_var && s.vars.size() == 1 && s.expr && walk::is_default_value(*s.expr))
                emit("GA-INIT", s.vars[0].span,
                     "'" + s.vars[0].name + "' is explicitly initialized to its default value", path);
            walk::own_exprs(s, loops, [&](const Expr& root, bool in_loop) {
                walk::exprs(root, [&](const Expr& e) { check_expr(e, in_loop, local, path); });
            });
        });
    }

    void check_expr(const Expr& e, bool in_loop, const LocalScope& local, const std::string& path) {
        const bool writes = e.kind == ExprKind::assignment ||
                            (e.kind == ExprKind::unary && (e.text == "++" || e.text == "--" || e.text == "delete"));
        if (writes && local.is_storage_ref(e.children.at(0))) {
            if (e.kind == ExprKind::assignment && e.text == "=" && walk::is_zero_literal(e.children.at(1)))
                emit("GA-ZEROASSIGN", e.span, "assigning a zero value to storage; use `delete`", path);
            if (in_loop)
                emit("GA-LOOPSTORE", e.span, "storage written on every loop iteration; accumulate in a local", path);
        }
        if (e.kind == ExprKind::binary && (e.text == "&&" || e.text == "||") && has_call(e.children.at(0)) &&
            !has_call(e.children.at(1)))
            emit("GA-OPORDER", e.span, "cheap operand evaluated after a call; put it first to short-circuit", path);
        if (e.kind == ExprKind::call && (e.call_name() == "require" || e.call_name() == "revert")) {
            for (std::size_t i = 1; i < e.children.size(); ++i) {
                const Expr& a = e.children[i];
                if (a.kind == ExprKind::literal && a.literal == LiteralKind::string && a.text.size() > 32)
                    emit("GA-LONGSTR", a.span,
                         "message is " + std::to_string(a.text.size()) + " bytes; keep it within 32", path);
            }
        }
    }

    bool has_call(const Expr& e) const {
        return walk::any_of(e, [&](const Expr& x) {
            if (x.kind != ExprKind::call) return false;
            const Expr& callee = x.callee();
            if (callee.kind == ExprKind::elementary) return false;
            if (callee.kind == ExprKind::identifier && unit_.find_contract(callee.text)) return false;
            return true;
        });
    }

    void check_modifier_inlining(const ContractDef& owner, const ModifierDef& m) {
        std::size_t statements = 0;
        for (const auto& s : *m.body)
            if (!(s.kind == StmtKind::expr && s.expr && s.expr->is_identifier("_"))) ++statements;
        if (statements < 2) return;
        std::size_t uses = 0;
        for (const auto& c : unit_.contracts) {
            ContractScope scope(c, unit_);
            const auto& chain = scope.chain();
            if (std::find(chain.begin(), chain.end(), &owner) == chain.end()) continue;
            for (const auto& f : c.functions)
                for (const auto& inv : f.modifiers)
                    if (inv.name == m.name) ++uses;
        }
        if (uses >= 2)
            emit("GA-MODINLINE", m.span,
                 "modifier '" + m.name + "' (" + std::to_string(statements) + " statements) is inlined into " +
                     std::to_string(uses) + " functions; move its body into an internal function",
                 owner.name + "." + m.name);
    }

    void check_bytes32(const ContractDef& c, const ContractScope& scope) {
        for (const auto& v : c.state_vars) {
            if (v.type_name.kind != TypeName::Kind::elementary ||
                (v.type_name.name != "string" && v.type_name.name != "bytes"))
                continue;
            std::size_t assignments = 0;
            bool short_literals = true;
            auto observe = [&](const Expr& value) {
                ++assignments;
                if (value.kind != ExprKind::literal ||
                    (value.literal != LiteralKind::string && value.literal != LiteralKind::hex) || value.text.size() > 32)
                    short_literals = false;
            };
            if (v.initializer) observe(*v.initializer);
            auto scan = [&](const std::vector<Stmt>& body, const LocalScope& local) {
                walk::all_exprs(body, [&](const Expr& e, bool) {
                    if (e.kind == ExprKind::assignment && e.children[0].is_identifier(v.name) &&
                        local.state_var(v.name) == &v)
                        observe(e.children[1]);
                });
            };
            for (const auto& f : c.functions)
                if (f.body) scan(*f.body, LocalScope(scope, f.params, f.returns, f.body));
            for (const auto& m : c.modifiers)
                if (m.body) scan(*m.body, LocalScope(scope, m.params, {}, m.body));
            if (assignments > 0 && short_literals)
                emit("GA-BYTES32", v.span,
                     "'" + v.name + "' only ever holds short literals; `bytes32` avoids dynamic storage",
                     c.name + "." + v.name);
        }
    }

    const SourceUnit& unit_;
    std::set<std::string> referenced_;
    std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> analyze_gas(const SourceUnit& unit, const LintConfig& config) {
    if (auto unknown = config.unknown_rules(); !unknown.empty())
        throw std::invalid_argument("unknown rule id '" + unknown.front() + "'");
    auto diags = GasAnalyzer(unit).run();
    finalize(diags, unit, config);
    return diags;
}

std::string layout_json(const ContractDef& contract, const SourceUnit& unit) {
    const StorageLayout layout = storage_layout(contract, unit);
    const PackingSuggestion packing = suggest_packing(contract, unit);
    nlohmann::ordered_json j;
    j["contract"] = contract.name;
    j["slots"] = nlohmann::ordered_json::array();
    for (const auto& e : layout.entries)
        j["slots"].push_back({{"name", e.name}, {"slot", e.slot}, {"offset", e.offset}, {"size", e.size}});
    j["total_slots"] = layout.total_slots;
    j["achievable_slots"] = packing.achievable_slots;
    return j.dump(2);
}

}  // namespace abcde
