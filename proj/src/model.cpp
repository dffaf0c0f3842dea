#include "abcde/model.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "abcde/catalog.hpp"

namespace abcde::model {

std::string_view to_string(ActorKind k) {
    switch (k) {
    case ActorKind::person: return "person";
    case ActorKind::system: return "system";
    case ActorKind::device: return "device";
    case ActorKind::contract: return "contract";
    case ActorKind::external_contract: return "external_contract";
    case ActorKind::oracle: return "oracle";
    case ActorKind::account: return "account";
    }
    return "?";
}

std::optional<ActorKind> parse_actor_kind(std::string_view word) {
    for (auto k : {ActorKind::person, ActorKind::system, ActorKind::device, ActorKind::contract,
                   ActorKind::external_contract, ActorKind::oracle, ActorKind::account})
        if (to_string(k) == word) return k;
    return std::nullopt;
}

std::string_view stereotype_name(ActorKind k) {
    return k == ActorKind::external_contract ? "external contract" : to_string(k);
}

bool executes_code(ActorKind k) {
    return k == ActorKind::contract || k == ActorKind::external_contract || k == ActorKind::oracle;
}

std::string_view to_string(Visibility v) {
    switch (v) {
    case Visibility::public_: return "public";
    case Visibility::external: return "external";
    case Visibility::internal: return "internal";
    case Visibility::private_: return "private";
    }
    return "?";
}

std::string_view to_string(Mutability m) {
    switch (m) {
    case Mutability::nonpayable: return "nonpayable";
    case Mutability::payable: return "payable";
    case Mutability::view: return "view";
    case Mutability::pure: return "pure";
    }
    return "?";
}

std::string_view stereotype_name(ContractKind k) {
    switch (k) {
    case ContractKind::contract: return "contract";
    case ContractKind::interface: return "interface";
    case ContractKind::library_contract: return "library contract";
    }
    return "?";
}

std::string_view tag_name(MessageKind k) {
    switch (k) {
    case MessageKind::trans_msg: return "trans-msg";
    case MessageKind::direct_msg: return "direct-msg";
    case MessageKind::view_call: return "view";
    case MessageKind::pure_call: return "pure";
    case MessageKind::fallback_call: return "fallback";
    case MessageKind::ether_transfer: return "ethers";
    case MessageKind::creation: return "create";
    }
    return "?";
}

std::optional<MessageKind> parse_message_tag(std::string_view tag) {
    for (auto k : {MessageKind::trans_msg, MessageKind::direct_msg, MessageKind::view_call,
                   MessageKind::pure_call, MessageKind::fallback_call, MessageKind::ether_transfer,
                   MessageKind::creation})
        if (tag_name(k) == tag) return k;
    return std::nullopt;
}

bool is_call(MessageKind k) { return k != MessageKind::ether_transfer; }

const Participant* Scenario::find_participant(std::string_view alias) const {
    for (const auto& p : participants)
        if (p.alias == alias) return &p;
    return nullptr;
}

namespace {

template <class T>
const T* find_named(const std::vector<T>& items, std::string_view name) {
    for (const auto& item : items)
        if (item.name == name) return &item;
    return nullptr;
}

}  // namespace

const ContractDecl* SystemModel::find_contract(std::string_view n) const { return find_named(contracts, n); }
const StructDecl* SystemModel::find_struct(std::string_view n) const { return find_named(structs, n); }
const EnumDecl* SystemModel::find_enum(std::string_view n) const { return find_named(enums, n); }
const ActorDecl* SystemModel::find_actor(std::string_view n) const { return find_named(actors, n); }

void SystemModel::add(ContractDecl c) {
    declaration_order.push_back({DeclKind::contract, contracts.size()});
    contracts.push_back(std::move(c));
}

void SystemModel::add(StructDecl s) {
    declaration_order.push_back({DeclKind::structure, structs.size()});
    structs.push_back(std::move(s));
}

void SystemModel::add(EnumDecl e) {
    declaration_order.push_back({DeclKind::enumeration, enums.size()});
    enums.push_back(std::move(e));
}

SystemModel without_spans(SystemModel m) {
    m.span = {};
    for (auto& a : m.actors) a.span = {};
    for (auto& c : m.contracts) {
        c.span = {};
        for (auto& v : c.state_vars) v.span = {};
        for (auto& e : c.events) e.span = {};
        for (auto& mod : c.modifiers) mod.span = {};
        for (auto& f : c.functions) f.span = {};
    }
    for (auto& s : m.structs) s.span = {};
    for (auto& e : m.enums) e.span = {};
    for (auto& sc : m.scenarios) {
        sc.span = {};
        for (auto& p : sc.participants) p.span = {};
        for (auto& msg : sc.messages) msg.span = {};
    }
    return m;
}

std::vector<std::string> linearize(const SystemModel& model, const std::string& contract) {
    return c3_linearize(contract, [&](const std::string& name) -> std::optional<std::vector<std::string>> {
        if (const auto* c = model.find_contract(name)) return c->parents;
        return std::nullopt;
    });
}

EffectiveInterface effective_interface(const SystemModel& model, const std::string& contract) {
    const auto order = linearize(model, contract);
    EffectiveInterface result;

    std::map<std::string, std::vector<std::string>> definers;
    std::vector<std::string> name_order;
    for (const auto& name : order) {
        const auto* c = model.find_contract(name);
        for (const auto& f : c->functions) {
            auto& who = definers[f.name];
            if (who.empty()) {
                name_order.push_back(f.name);
                result.functions.push_back({f, name});
            }
            if (std::find(who.begin(), who.end(), name) == who.end()) who.push_back(name);
        }
    }

    std::map<std::string, std::vector<std::string>> ancestry;
    auto derives_from = [&](const std::string& derived, const std::string& base) {
        auto it = ancestry.find(derived);
        if (it == ancestry.end()) it = ancestry.emplace(derived, linearize(model, derived)).first;
        return std::find(it->second.begin(), it->second.end(), base) != it->second.end();
    };
    for (const auto& fname : name_order) {
        const auto& who = definers[fname];
        for (std::size_t i = 0; i < who.size(); ++i)
            for (std::size_t j = i + 1; j < who.size(); ++j)
                if (!derives_from(who[i], who[j]) && !derives_from(who[j], who[i]))
                    result.collisions.push_back({fname, who[i], who[j]});
    }
    return result;
}

std::vector<MessageActivation> trace_activations(const Scenario& scenario) {
    struct Activation {
        std::string participant;
        std::optional<std::size_t> parent;
    };
    std::vector<Activation> tree;
    std::optional<std::size_t> current;

    auto runs_code = [&](const std::string& alias) {
        const auto* p = scenario.find_participant(alias);
        return p && executes_code(p->kind);
    };

    std::vector<MessageActivation> out;
    out.reserve(scenario.messages.size());
    for (const auto& msg : scenario.messages) {
        MessageActivation state;
        std::optional<std::size_t> caller;
        if (runs_code(msg.from)) {
            for (auto a = current; a; a = tree[*a].parent) {
                if (tree[*a].participant == msg.from) {
                    caller = a;
                    break;
                }
            }
            state.sender_active = caller.has_value();
        }
        current = caller;
        if (is_call(msg.kind)) {
            if (caller && msg.to != msg.from) {
                for (auto a = caller; a; a = tree[*a].parent)
                    if (tree[*a].participant == msg.to) state.reenters = true;
            }
            tree.push_back({msg.to, caller});
            current = tree.size() - 1;
        }
        out.push_back(state);
    }
    return out;
}

namespace {

struct Key {
    std::size_t top;
    std::size_t sub;
    auto operator<=>(const Key&) const = default;
};

class Validator {
public:
    explicit Validator(const SystemModel& m) : m_(m) {}

    std::vector<Diagnostic> run() {
        actor_slots_ = m_.actors.size();
        check_names();
        for (std::size_t i = 0; i < m_.declaration_order.size(); ++i) {
            const auto& ref = m_.declaration_order[i];
            Key key{actor_slots_ + i, 0};
            switch (ref.kind) {
            case DeclKind::contract: check_contract(m_.contracts.at(ref.index), key); break;
            case DeclKind::structure: check_struct(m_.structs.at(ref.index), key); break;
            case DeclKind::enumeration: check_enum(m_.enums.at(ref.index), key); break;
            }
        }
        for (std::size_t i = 0; i < m_.scenarios.size(); ++i)
            check_scenario(m_.scenarios[i], Key{actor_slots_ + m_.declaration_order.size() + i, 0});

        std::stable_sort(found_.begin(), found_.end(), [](const auto& a, const auto& b) {
            return std::tie(a.first, a.second.rule_id) < std::tie(b.first, b.second.rule_id);
        });
        std::vector<Diagnostic> out;
        for (auto& [k, d] : found_) out.push_back(std::move(d));
        return out;
    }

private:
    void emit(Key key, std::string_view rule, std::string message, const SourceSpan& span, std::string path) {
        Diagnostic d = make_diagnostic(rule, std::move(message));
        if (span.length > 0) d.span = span;
        d.path = std::move(path);
        found_.emplace_back(key, std::move(d));
    }

    void check_names() {
        std::map<std::string, int> seen;
        auto visit = [&](const std::string& name, const SourceSpan& span, Key key) {
            if (seen[name]++ > 0) emit(key, "MOD-DUP-NAME", "name '" + name + "' is declared more than once", span, name);
        };
        for (std::size_t i = 0; i < m_.actors.size(); ++i)
            visit(m_.actors[i].name, m_.actors[i].span, Key{i, 0});
        std::size_t base = m_.actors.size();
        for (std::size_t i = 0; i < m_.declaration_order.size(); ++i) {
            const auto& ref = m_.declaration_order[i];
            Key key{base + i, 0};
            switch (ref.kind) {
            case DeclKind::contract: visit(m_.contracts.at(ref.index).name, m_.contracts.at(ref.index).span, key); break;
            case DeclKind::structure: visit(m_.structs.at(ref.index).name, m_.structs.at(ref.index).span, key); break;
            case DeclKind::enumeration: visit(m_.enums.at(ref.index).name, m_.enums.at(ref.index).span, key); break;
            }
        }
        base += m_.declaration_order.size();
        for (std::size_t i = 0; i < m_.scenarios.size(); ++i)
            visit(m_.scenarios[i].name, m_.scenarios[i].span, Key{base + i, 0});
    }

    bool type_declared(const std::string& name) const {
        return m_.find_contract(name) || m_.find_struct(name) || m_.find_enum(name);
    }

    void check_type(const TypeName& t, Key key, const SourceSpan& span, const std::string& path) {
        switch (t.kind) {
        case TypeName::Kind::elementary: return;
        case TypeName::Kind::user_defined:
            if (!type_declared(t.name)) emit(key, "MOD-UNKNOWN-TYPE", "unknown type '" + t.name + "'", span, path);
            return;
        case TypeName::Kind::array: check_type(t.element(), key, span, path); return;
        case TypeName::Kind::mapping:
            if (t.key().is_array() || t.key().is_mapping() ||
                (t.key().kind == TypeName::Kind::user_defined && m_.find_struct(t.key().name)))
                emit(key, "MOD-MAPPING-KEY", "mapping key '" + t.key().to_string() + "' is not an elementary type",
                     span, path);
            check_type(t.key(), key, span, path);
            check_type(t.value(), key, span, path);
            return;
        }
    }

    void check_contract(const ContractDecl& c, Key key) {
        std::set<std::string> parents_seen;
        bool parents_ok = true;
        for (const auto& p : c.parents) {
            if (!parents_seen.insert(p).second) {
                emit(key, "MOD-DUP-PARENT", "'" + p + "' is listed twice as a parent of '" + c.name + "'", c.span, c.name);
                parents_ok = false;
                continue;
            }
            const auto* pc = m_.find_contract(p);
            if (!pc) {
                if (m_.find_struct(p) || m_.find_enum(p))
                    emit(key, "MOD-PARENT-KIND", "'" + c.name + "' cannot inherit from type '" + p + "'", c.span, c.name);
                else
                    emit(key, "MOD-UNKNOWN-PARENT", "parent '" + p + "' of '" + c.name + "' is not declared", c.span, c.name);
                parents_ok = false;
            } else if (pc->kind == ContractKind::library_contract) {
                emit(key, "MOD-PARENT-KIND", "'" + c.name + "' cannot inherit from library '" + p + "'", c.span, c.name);
            }
        }

        std::vector<std::string> ancestors;
        if (parents_ok) {
            try {
                auto lin = linearize(m_, c.name);
                ancestors.assign(lin.begin() + 1, lin.end());
            } catch (const CycleError& e) {
                const auto& cyc = e.cycle();
                if (std::find(cyc.begin(), cyc.end(), c.name) != cyc.end())
                    emit(key, "MOD-INHERIT-CYCLE", e.what(), c.span, c.name);
            } catch (const LinearizationError& e) {
                emit(key, "MOD-INHERIT-C3", e.what(), c.span, c.name);
            } catch (const UnknownContractError&) {
                // reported on the contract that names the missing parent
            }
        }

        if (c.kind == ContractKind::interface)
            for (const auto& v : c.state_vars)
                emit(key, "MOD-IFACE-STATE", "interface '" + c.name + "' declares state variable '" + v.name + "'",
                     v.span, c.name + ".state." + v.name);
        if (c.kind == ContractKind::library_contract)
            for (const auto& v : c.state_vars)
                emit(key, "MOD-LIBRARY-STATE", "library '" + c.name + "' declares state variable '" + v.name + "'",
                     v.span, c.name + ".state." + v.name);

        for (const auto& v : c.state_vars) check_type(v.type, key, v.span, c.name + ".state." + v.name);
        for (const auto& e : c.events)
            for (const auto& p : e.params) check_type(p.type, key, e.span, c.name + ".events." + e.name);
        for (const auto& mod : c.modifiers)
            for (const auto& p : mod.params) check_type(p.type, key, mod.span, c.name + ".modifiers." + mod.name);
        for (const auto& f : c.functions) {
            for (const auto& p : f.params) check_type(p.type, key, f.span, c.name + ".functions." + f.name);
            for (const auto& r : f.returns) check_type(r, key, f.span, c.name + ".functions." + f.name);
        }

        check_members(c, ancestors, key);
    }

    void check_members(const ContractDecl& c, const std::vector<std::string>& ancestors, Key key) {
        std::set<std::string> inherited_events, inherited_mods, inherited_vars;
        for (const auto& a : ancestors) {
            const auto* ac = m_.find_contract(a);
            for (const auto& e : ac->events) inherited_events.insert(e.name);
            for (const auto& mod : ac->modifiers) inherited_mods.insert(mod.name);
            for (const auto& v : ac->state_vars) inherited_vars.insert(v.name);
        }
        auto unique = [&](const auto& items, std::set<std::string> scope, std::string_view what) {
            for (const auto& item : items) {
                if (!scope.insert(item.name).second)
                    emit(key, "MOD-DUP-MEMBER",
                         std::string(what) + " '" + item.name + "' is already declared in the scope of '" + c.name + "'",
                         item.span, c.name + "." + std::string(what) + "s." + item.name);
            }
        };
        unique(c.events, inherited_events, "event");
        unique(c.modifiers, inherited_mods, "modifier");
        unique(c.state_vars, inherited_vars, "state");

        std::set<std::string> visible = inherited_mods;
        for (const auto& mod : c.modifiers) visible.insert(mod.name);
        for (const auto& f : c.functions)
            for (const auto& applied : f.applied_modifiers)
                if (!visible.count(applied))
                    emit(key, "MOD-UNKNOWN-MODIFIER",
                         "function '" + f.name + "' uses undeclared modifier '" + applied + "'", f.span,
                         c.name + ".functions." + f.name);
    }

    void check_struct(const StructDecl& s, Key key) {
        for (const auto& f : s.fields) check_type(f.type, key, s.span, s.name + "." + f.name);
    }

    void check_enum(const EnumDecl& e, Key key) {
        if (e.values.empty()) emit(key, "MOD-ENUM-EMPTY", "enum '" + e.name + "' has no values", e.span, e.name);
    }

    void check_scenario(const Scenario& sc, Key key) {
        std::set<std::string> aliases;
        for (std::size_t i = 0; i < sc.participants.size(); ++i) {
            const auto& p = sc.participants[i];
            Key k{key.top, i};
            std::string path = sc.name + ".participants." + p.alias;
            if (!aliases.insert(p.alias).second) {
                emit(k, "MOD-PART-DUP", "participant '" + p.alias + "' is declared twice", p.span, path);
                continue;
            }
            if (p.contract) {
                if (!m_.find_contract(*p.contract))
                    emit(k, "MOD-PART-UNDECLARED", "participant '" + p.alias + "' references undeclared contract '" +
                                                       *p.contract + "'", p.span, path);
            } else if (const auto* actor = m_.find_actor(p.alias)) {
                if (actor->kind != p.kind)
                    emit(k, "MOD-PART-KIND", "participant '" + p.alias + "' is declared as " +
                                                 std::string(to_string(actor->kind)) + ", not " +
                                                 std::string(to_string(p.kind)), p.span, path);
            } else {
                emit(k, "MOD-PART-UNDECLARED", "participant '" + p.alias + "' is not a declared actor", p.span, path);
            }
        }

        const auto trace = trace_activations(sc);
        for (std::size_t i = 0; i < sc.messages.size(); ++i) {
            const auto& msg = sc.messages[i];
            Key k{key.top, sc.participants.size() + i};
            std::string path = sc.name + ".messages[" + std::to_string(i) + "]";
            const auto* from = sc.find_participant(msg.from);
            const auto* to = sc.find_participant(msg.to);
            if (!from || !to) {
                emit(k, "MOD-MSG-ENDPOINT", "message endpoint '" + (from ? msg.to : msg.from) +
                                                "' is not a participant of '" + sc.name + "'", msg.span, path);
                continue;
            }
            check_message(msg, *from, *to, k, path);
            if (!trace[i].sender_active)
                emit(k, "MOD-ACTIVATION", "'" + msg.from + "' sends '" + msg.label + "' without an active call",
                     msg.span, path);
        }
    }

    void check_message(const Message& msg, const Participant& from, const Participant& to, Key k,
                       const std::string& path) {
        const bool from_code = executes_code(from.kind);
        const bool to_code = executes_code(to.kind);
        const std::string what = "'" + msg.label + "' [" + std::string(tag_name(msg.kind)) + "]";
        if (msg.dashed && msg.kind != MessageKind::ether_transfer)
            emit(k, "MOD-DASHED-KIND", "dashed arrow on " + what + "; only ether transfers are dashed", msg.span, path);
        if (msg.kind != MessageKind::ether_transfer &&
            (from.kind == ActorKind::account || to.kind == ActorKind::account))
            emit(k, "MOD-ACCOUNT-ETHERONLY", what + " involves an account, which only transfers ether", msg.span, path);
        switch (msg.kind) {
        case MessageKind::trans_msg:
            if (from_code) emit(k, "MOD-TRANSMSG-SOURCE", what + " is sent by contract '" + msg.from + "'", msg.span, path);
            if (!to_code) emit(k, "MOD-TRANSMSG-TARGET", what + " is sent to non-contract '" + msg.to + "'", msg.span, path);
            break;
        case MessageKind::direct_msg:
            if (!from_code || !to_code)
                emit(k, "MOD-DIRECTMSG", what + " must go from a contract to a contract", msg.span, path);
            break;
        case MessageKind::fallback_call:
            if (msg.from != msg.to || !from_code)
                emit(k, "MOD-FALLBACK-SELF", what + " must be sent by a contract to itself", msg.span, path);
            break;
        case MessageKind::view_call:
        case MessageKind::pure_call:
        case MessageKind::creation:
            if (!to_code) emit(k, "MOD-CALL-TARGET", what + " targets non-contract '" + msg.to + "'", msg.span, path);
            break;
        case MessageKind::ether_transfer: break;
        }
    }

    const SystemModel& m_;
    std::size_t actor_slots_ = 0;
    std::vector<std::pair<Key, Diagnostic>> found_;
};

}  // namespace

std::vector<Diagnostic> validate_model(const SystemModel& model) { return Validator(model).run(); }

}  // namespace abcde::model
