#include "abcde/catalog.hpp"

#include <algorithm>
#include <array>

namespace abcde {

std::string_view to_string(Phase p) { return p == Phase::design ? "design" : "coding"; }

namespace {

using enum PatternId;
constexpr auto kAuto = RuleClass::automatic;
constexpr auto kCond = RuleClass::conditional_manual;
constexpr auto kUncond = RuleClass::unconditional_manual;

// Design checklist rows.
constexpr std::string_view kReentrancy = "Re-entrancy";
constexpr std::string_view kDependencies = "Dependencies";
constexpr std::string_view kMultipleInheritance = "Multiple Inheritance Caution";
constexpr std::string_view kFailSafe = "Include a fail-safe mechanism";
constexpr std::string_view kLimitEther = "Limit the amount of ether";
constexpr std::string_view kRandomness = "Be careful with randomness";
constexpr std::string_view kTimestamp = "Be careful with Timestamp";
constexpr std::string_view kZeroBalance = "Never assume that a contract has zero balance";
constexpr std::string_view kTxOrdering = "Transaction Ordering";

// Coding checklist rows.
constexpr std::string_view kExternalCalls = "External calls";
constexpr std::string_view kOverflow = "Prevent overflow and underflow";
constexpr std::string_view kRounding = "Beware of rounding errors";
constexpr std::string_view kValidate = "Validate inputs to external and public functions";
constexpr std::string_view kUnbounded = "Prevent unbounded loops";
constexpr std::string_view kTxOrigin = "tx.origin";
constexpr std::string_view kFallback = "Fallback functions";
constexpr std::string_view kBuiltins = "Check if built-in variables or functions were overridden";
constexpr std::string_view kInterfaceType = "Use interface type instead of the address for type safety";
constexpr std::string_view kAssert = "Enforce invariants with assert()";
constexpr std::string_view kPragma = "Lock pragmas to specific compiler version";
constexpr std::string_view kWarnings = "Fix compiler warnings";
constexpr std::string_view kTesting = "Testing";

RuleInfo model_rule(std::string_view id, std::string_view summary) {
    return {id, Engine::model, Severity::error, kAuto, {}, std::nullopt, {}, summary};
}

RuleInfo design_rule(std::string_view id, Severity sev, RuleClass cls, std::string_view row,
                     std::set<PatternId> patterns, std::string_view summary) {
    return {id, Engine::design, sev, cls, row, Phase::design, std::move(patterns), summary};
}

RuleInfo lint_rule(std::string_view id, Severity sev, RuleClass cls, std::string_view row,
                   std::set<PatternId> patterns, std::string_view summary,
                   Phase phase = Phase::coding) {
    return {id, Engine::lint, sev, cls, row, phase, std::move(patterns), summary};
}

RuleInfo gas_rule(std::string_view id, Severity sev, RuleClass cls, std::string_view summary) {
    return {id, Engine::gas, sev, cls, {}, std::nullopt, {}, summary};
}

const std::vector<RuleInfo>& catalog() {
    static const std::vector<RuleInfo> rules = {
        model_rule("MOD-ACCOUNT-ETHERONLY", "account participants only send or receive ether"),
        model_rule("MOD-ACTIVATION", "a contract sends a call while it has no open activation"),
        model_rule("MOD-CALL-TARGET", "view, pure, fallback and creation messages target a contract"),
        model_rule("MOD-DASHED-KIND", "dashed arrows are reserved for ether transfers"),
        model_rule("MOD-DIRECTMSG", "direct-msg goes from a contract to a contract"),
        model_rule("MOD-DUP-MEMBER", "event, modifier and state variable names are unique in inherited scope"),
        model_rule("MOD-DUP-NAME", "declaration, actor and scenario names are unique in the model"),
        model_rule("MOD-DUP-PARENT", "a parent appears at most once in an inheritance list"),
        model_rule("MOD-ENUM-EMPTY", "enums declare at least one value"),
        model_rule("MOD-FALLBACK-SELF", "fallback calls are sent by a contract to itself"),
        model_rule("MOD-IFACE-STATE", "interfaces hold only function declarations"),
        model_rule("MOD-INHERIT-C3", "the inheritance graph admits a C3 linearization"),
        model_rule("MOD-INHERIT-CYCLE", "the inheritance graph is acyclic"),
        model_rule("MOD-LIBRARY-STATE", "libraries declare no state variables"),
        model_rule("MOD-MAPPING-KEY", "mapping keys are elementary, enum or contract types"),
        model_rule("MOD-MSG-ENDPOINT", "message endpoints are declared participants"),
        model_rule("MOD-PARENT-KIND", "parents are contracts or interfaces"),
        model_rule("MOD-PART-DUP", "participant aliases are unique within a scenario"),
        model_rule("MOD-PART-KIND", "a participant's kind matches the declared actor"),
        model_rule("MOD-PART-UNDECLARED", "participants reference a declared actor or contract"),
        model_rule("MOD-TRANSMSG-SOURCE", "trans-msg comes from an external participant"),
        model_rule("MOD-TRANSMSG-TARGET", "trans-msg is delivered to a contract"),
        model_rule("MOD-UNKNOWN-MODIFIER", "applied modifiers are declared in the contract or an ancestor"),
        model_rule("MOD-UNKNOWN-PARENT", "parents name declared contracts or interfaces"),
        model_rule("MOD-UNKNOWN-TYPE", "user-defined type names resolve to a declaration"),

        design_rule("DC-REENTRANCY", Severity::error, kAuto, kReentrancy, {CEI, MU},
                    "a participant receives a message while its own outgoing call is still active"),
        design_rule("DC-DEPS", Severity::manual, kCond, kDependencies, {},
                    "external contracts or libraries are referenced; audit the dependencies"),
        design_rule("DC-MI", Severity::warning, kAuto, kMultipleInheritance, {},
                    "two unrelated ancestors define the same function name"),
        design_rule("DC-FAILSAFE", Severity::warning, kAuto, kFailSafe, {ES, SB, RL, PD},
                    "no contract is tagged with an emergency stop or proxy pattern"),
        design_rule("DC-BALANCE", Severity::warning, kAuto, kLimitEther, {RL, BL, WF},
                    "ether flows into a contract but no contract limits balance or rate"),
        design_rule("DC-PUSHPAY", Severity::warning, kAuto, kLimitEther, {WF},
                    "a contract pushes ether without a preceding withdrawal request"),
        design_rule("DC-RANDOM", Severity::manual, kUncond, kRandomness, {},
                    "do not rely on on-chain pseudo-randomness"),
        design_rule("DC-TIMESTAMP", Severity::manual, kUncond, kTimestamp, {TC},
                    "review every direct and indirect use of block timestamps"),
        design_rule("DC-ZEROBAL", Severity::manual, kUncond, kZeroBalance, {},
                    "ether can be forced into any account; avoid strict balance invariants"),
        design_rule("DC-TXORDER", Severity::manual, kUncond, kTxOrdering, {TC},
                    "miners can reorder transactions submitted close in time"),

        lint_rule("CL-LOWLEVEL", Severity::error, kAuto, kExternalCalls, {CEI, MU, GC, WF},
                  "return value of a low-level call is discarded"),
        lint_rule("CL-MULTISEND", Severity::warning, kAuto, kExternalCalls, {CEI, MU, GC, WF},
                  "several ether transfers in one function"),
        lint_rule("CL-OVERFLOW", Severity::warning, kAuto, kOverflow, {MH, GC},
                  "unchecked integer arithmetic before 0.8.0 without a SafeMath-style library"),
        lint_rule("CL-DIV", Severity::info, kAuto, kRounding, {MH, GC},
                  "integer division rounds toward zero"),
        lint_rule("CL-VALIDATE", Severity::warning, kAuto, kValidate, {GC},
                  "public function never checks its arguments with require (heuristic)"),
        lint_rule("CL-UNBOUNDED", Severity::warning, kAuto, kUnbounded, {},
                  "loop bound depends on storage or a dynamic array length"),
        lint_rule("CL-TXORIGIN", Severity::error, kAuto, kTxOrigin, {},
                  "tx.origin used for authorization"),
        lint_rule("CL-FALLBACK", Severity::warning, kAuto, kFallback, {CEI, MU, GC},
                  "fallback function is not simple or does not check msg.data (heuristic)"),
        lint_rule("CL-SHADOW", Severity::error, kAuto, kBuiltins, {GC},
                  "declaration shadows a built-in global"),
        lint_rule("CL-RAWADDR", Severity::info, kAuto, kInterfaceType, {GC},
                  "raw address parameter used as a contract; prefer an interface type"),
        lint_rule("CL-ASSERTUSE", Severity::warning, kAuto, kAssert, {GC},
                  "assert() used for input validation; use require()"),
        lint_rule("CL-PRAGMA", Severity::warning, kAuto, kPragma, {},
                  "compiler version pragma missing or not locked"),
        lint_rule("CL-FIXWARN", Severity::manual, kUncond, kWarnings, {},
                  "compile with the latest compiler and fix every warning"),
        lint_rule("CL-COVERAGE", Severity::manual, kUncond, kTesting, {},
                  "reach full test coverage, including critical edge cases"),
        lint_rule("CL-TIMESTAMP", Severity::info, kAuto, kTimestamp, {TC},
                  "block timestamp read; miners can skew it", Phase::design),
        lint_rule("CL-BLOCKNUM", Severity::warning, kAuto, kTimestamp, {TC},
                  "block.number compared against a constant as a timestamp proxy", Phase::design),

        gas_rule("GA-PACK", Severity::warning, kAuto, "PK: state variables can be reordered into fewer slots"),
        gas_rule("GA-INIT", Severity::warning, kAuto, "NI: explicit initialization to the default value"),
        gas_rule("GA-ARRAY", Severity::info, kAuto, "MP: dynamic storage array; an integer-keyed mapping is cheaper"),
        gas_rule("GA-ZEROASSIGN", Severity::info, kAuto, "DV: zeroing storage; use delete"),
        gas_rule("GA-LOOPSTORE", Severity::warning, kAuto, "LS: storage written inside a loop"),
        gas_rule("GA-OPORDER", Severity::info, kAuto, "EP: costly call evaluated before a cheap operand"),
        gas_rule("GA-PUBEXT", Severity::info, kAuto, "LE: public function never called internally; declare it external"),
        gas_rule("GA-MODINLINE", Severity::info, kAuto, "LM: multi-statement modifier inlined into several functions"),
        gas_rule("GA-LONGSTR", Severity::warning, kAuto, "PK: revert reason longer than 32 bytes"),
        gas_rule("GA-BYTES32", Severity::info, kAuto, "PK: short constant string could be bytes32"),
        gas_rule("GA-SIZE", Severity::manual, kUncond, "EIP-170: keep deployed bytecode under 24 KB"),
        gas_rule("GA-USELIB", Severity::manual, kUncond, "UL: move complex shared logic into libraries"),
        gas_rule("GA-EVENTLOG", Severity::manual, kUncond, "EL: read historic data from the event log, not storage"),
    };
    return rules;
}

}  // namespace

std::span<const RuleInfo> rule_catalog() { return catalog(); }

const RuleInfo* find_rule(std::string_view id) {
    const auto& rules = catalog();
    auto it = std::find_if(rules.begin(), rules.end(), [&](const RuleInfo& r) { return r.id == id; });
    return it == rules.end() ? nullptr : &*it;
}

Diagnostic make_diagnostic(std::string_view id, std::string message) {
    Diagnostic d;
    d.rule_id = std::string(id);
    d.message = std::move(message);
    if (const RuleInfo* info = find_rule(id)) {
        d.severity = info->severity;
        d.checklist_ref = std::string(info->checklist_row);
        d.patterns = info->patterns;
    }
    return d;
}

std::span<const ChecklistRow> checklist_rows(Phase phase) {
    static const std::vector<ChecklistRow> design = {
        {kReentrancy, {"DC-REENTRANCY"}},
        {kDependencies, {"DC-DEPS"}},
        {kMultipleInheritance, {"DC-MI"}},
        {kFailSafe, {"DC-FAILSAFE"}},
        {kLimitEther, {"DC-BALANCE", "DC-PUSHPAY"}},
        {kRandomness, {"DC-RANDOM"}},
        {kTimestamp, {"DC-TIMESTAMP"}},
        {kZeroBalance, {"DC-ZEROBAL"}},
        {kTxOrdering, {"DC-TXORDER"}},
    };
    static const std::vector<ChecklistRow> coding = {
        {kExternalCalls, {"CL-LOWLEVEL", "CL-MULTISEND"}},
        {kOverflow, {"CL-OVERFLOW"}},
        {kRounding, {"CL-DIV"}},
        {kValidate, {"CL-VALIDATE"}},
        {kUnbounded, {"CL-UNBOUNDED"}},
        {kTxOrigin, {"CL-TXORIGIN"}},
        {kFallback, {"CL-FALLBACK"}},
        {kBuiltins, {"CL-SHADOW"}},
        {kInterfaceType, {"CL-RAWADDR"}},
        {kAssert, {"CL-ASSERTUSE"}},
        {kPragma, {"CL-PRAGMA"}},
        {kWarnings, {"CL-FIXWARN"}},
        {kTesting, {"CL-COVERAGE"}},
    };
    return phase == Phase::design ? std::span<const ChecklistRow>(design)
                                  : std::span<const ChecklistRow>(coding);
}

}  // namespace abcde
