#include "abcde/design_check.hpp"

#include <algorithm>
#include <tuple>

#include "abcde/catalog.hpp"

namespace abcde {

using namespace model;

namespace {

enum Group { kContracts, kScenarios, kModelWide, kManual };

struct Keyed {
    std::tuple<int, std::size_t, std::size_t> key;
    Diagnostic diag;
};

class DesignChecker {
public:
    explicit DesignChecker(const SystemModel& m) : m_(m) {}

    std::vector<Diagnostic> run() {
        check_inheritance();
        for (std::size_t i = 0; i < m_.scenarios.size(); ++i) check_scenario(i);
        check_failsafe();
        check_balance();
        check_dependencies();
        for (std::string_view id : {"DC-RANDOM", "DC-TIMESTAMP", "DC-ZEROBAL", "DC-TXORDER"})
            add({kManual, 0, 0}, id, std::string(find_rule(id)->summary), {}, "");
        std::stable_sort(found_.begin(), found_.end(), [](const Keyed& a, const Keyed& b) {
            return std::tie(a.key, a.diag.rule_id) < std::tie(b.key, b.diag.rule_id);
        });
        std::vector<Diagnostic> out;
        out.reserve(found_.size());
        for (auto& k : found_) out.push_back(std::move(k.diag));
        return out;
    }

private:
    void add(std::tuple<int, std::size_t, std::size_t> key, std::string_view rule, std::string message,
             const SourceSpan& span, std::string path) {
        Diagnostic d = make_diagnostic(rule, std::move(message));
        if (span.length > 0) d.span = span;
        d.path = std::move(path);
        found_.push_back({key, std::move(d)});
    }

    void check_inheritance() {
        for (std::size_t i = 0; i < m_.contracts.size(); ++i) {
            const auto& c = m_.contracts[i];
            if (c.parents.size() < 2) continue;
            EffectiveInterface iface;
            try {
                iface = effective_interface(m_, c.name);
            } catch (const std::exception&) {
                continue;  // reported by validation
            }
            for (const auto& col : iface.collisions) {
                add({kContracts, i, 0}, "DC-MI",
                    "'" + col.function + "' is defined by both '" + col.first + "' and '" + col.second +
                        "'; the linearization of '" + c.name + "' resolves it to '" + col.first + "'",
                    c.span, c.name);
            }
        }
    }

    bool is_system_contract(const Participant& p) const {
        return p.contract.has_value() && m_.find_contract(*p.contract) != nullptr;
    }

    static bool is_payee(const Participant& p) {
        return !p.contract && (p.kind == ActorKind::person || p.kind == ActorKind::account);
    }

    void check_scenario(std::size_t index) {
        const Scenario& sc = m_.scenarios[index];
        const auto trace = trace_activations(sc);
        for (std::size_t i = 0; i < sc.messages.size(); ++i) {
            const Message& msg = sc.messages[i];
            const std::string path = sc.name + ".messages[" + std::to_string(i) + "]";
            if (trace[i].reenters) {
                add({kScenarios, index, i}, "DC-REENTRANCY",
                    "'" + msg.from + "' calls back into '" + msg.to + "' while '" + msg.to +
                        "' is still waiting on an outgoing call; commit state before external calls",
                    msg.span, path);
            }
            if (msg.kind != MessageKind::ether_transfer) continue;
            const Participant* from = sc.find_participant(msg.from);
            const Participant* to = sc.find_participant(msg.to);
            if (!from || !to || !is_system_contract(*from) || !is_payee(*to)) continue;
            const bool pulled = i > 0 && sc.messages[i - 1].kind == MessageKind::trans_msg &&
                                sc.messages[i - 1].from == msg.to && sc.messages[i - 1].to == msg.from;
            if (!pulled) {
                add({kScenarios, index, i}, "DC-PUSHPAY",
                    "'" + msg.from + "' pushes ether to '" + msg.to +
                        "' without a preceding withdrawal request; let the owner withdraw instead",
                    msg.span, path);
            }
        }
    }

    bool any_tag(std::initializer_list<PatternId> tags) const {
        for (const auto& c : m_.contracts)
            for (PatternId t : tags)
                if (c.pattern_tags.count(t)) return true;
        return false;
    }

    void check_failsafe() {
        const bool has_contract = std::any_of(m_.contracts.begin(), m_.contracts.end(),
                                              [](const ContractDecl& c) { return c.kind == ContractKind::contract; });
        if (!has_contract || any_tag({PatternId::ES, PatternId::PD})) return;
        add({kModelWide, 0, 0}, "DC-FAILSAFE",
            "no contract is tagged ES or PD; the design has no way to pause or update the system", m_.span, m_.name);
    }

    void check_balance() {
        if (any_tag({PatternId::BL, PatternId::RL})) return;
        for (const auto& sc : m_.scenarios) {
            for (std::size_t i = 0; i < sc.messages.size(); ++i) {
                const Message& msg = sc.messages[i];
                if (msg.kind != MessageKind::ether_transfer) continue;
                const Participant* to = sc.find_participant(msg.to);
                if (!to || !is_system_contract(*to)) continue;
                add({kModelWide, 1, 0}, "DC-BALANCE",
                    "'" + msg.to + "' receives ether but no contract is tagged BL or RL to cap the amount held",
                    msg.span, sc.name + ".messages[" + std::to_string(i) + "]");
                return;
            }
        }
    }

    void check_dependencies() {
        std::vector<std::string> deps;
        for (const auto& a : m_.actors)
            if (a.kind == ActorKind::external_contract) deps.push_back(a.name);
        for (const auto& sc : m_.scenarios)
            for (const auto& p : sc.participants)
                if (p.kind == ActorKind::external_contract && !p.contract &&
                    std::find(deps.begin(), deps.end(), p.alias) == deps.end())
                    deps.push_back(p.alias);
        for (const auto& c : m_.contracts)
            if (c.kind == ContractKind::library_contract) deps.push_back(c.name);
        if (deps.empty()) return;
        std::string list;
        for (const auto& d : deps) list += (list.empty() ? "" : ", ") + d;
        add({kManual, 0, 0}, "DC-DEPS", "review the provenance of external code: " + list, {}, "");
    }

    const SystemModel& m_;
    std::vector<Keyed> found_;
};

}  // namespace

std::vector<Diagnostic> check_design(const SystemModel& model) { return DesignChecker(model).run(); }

}  // namespace abcde
