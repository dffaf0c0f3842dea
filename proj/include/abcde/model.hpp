#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "abcde/diagnostic.hpp"
#include "abcde/inheritance.hpp"
#include "abcde/source.hpp"
#include "abcde/type_name.hpp"

namespace abcde::model {

/// Participant stereotypes of sequence diagrams.
enum class ActorKind { person, system, device, contract, external_contract, oracle, account };

std::string_view to_string(ActorKind k);
std::optional<ActorKind> parse_actor_kind(std::string_view word);
/// Stereotype text as rendered in diagrams (`external contract`).
std::string_view stereotype_name(ActorKind k);
/// Contracts, external contracts and oracles execute code; the rest hold keys.
bool executes_code(ActorKind k);

struct ActorDecl {
    std::string name;
    ActorKind kind = ActorKind::person;
    SourceSpan span;
    bool operator==(const ActorDecl&) const = default;
};

enum class Visibility { public_, external, internal, private_ };
enum class Mutability { nonpayable, payable, view, pure };

std::string_view to_string(Visibility v);
std::string_view to_string(Mutability m);

struct Param {
    std::string name;
    TypeName type;
    bool operator==(const Param&) const = default;
};

struct StateVar {
    std::string name;
    TypeName type;
    Visibility visibility = Visibility::internal;
    SourceSpan span;

    Collection collection() const { return collection_of(type); }
    bool operator==(const StateVar&) const = default;
};

struct EventDecl {
    std::string name;
    std::vector<Param> params;
    SourceSpan span;
    bool operator==(const EventDecl&) const = default;
};

struct ModifierDecl {
    std::string name;
    std::vector<Param> params;
    std::string guard;  // optional description of the guarded condition
    SourceSpan span;
    bool operator==(const ModifierDecl&) const = default;
};

struct FunctionSig {
    std::string name;
    std::vector<Param> params;
    std::vector<TypeName> returns;
    Visibility visibility = Visibility::public_;
    Mutability mutability = Mutability::nonpayable;
    std::vector<std::string> applied_modifiers;
    SourceSpan span;
    bool operator==(const FunctionSig&) const = default;
};

/// Class-diagram stereotype of a contract-like declaration.
enum class ContractKind { contract, interface, library_contract };

std::string_view stereotype_name(ContractKind k);

struct ContractDecl {
    std::string name;
    ContractKind kind = ContractKind::contract;
    std::vector<std::string> parents;
    std::vector<StateVar> state_vars;
    std::vector<EventDecl> events;
    std::vector<ModifierDecl> modifiers;
    std::vector<FunctionSig> functions;
    std::set<PatternId> pattern_tags;
    SourceSpan span;
    bool operator==(const ContractDecl&) const = default;
};

struct StructDecl {
    std::string name;
    std::vector<Param> fields;
    SourceSpan span;
    bool operator==(const StructDecl&) const = default;
};

struct EnumDecl {
    std::string name;
    std::vector<std::string> values;
    SourceSpan span;
    bool operator==(const EnumDecl&) const = default;
};

enum class MessageKind { trans_msg, direct_msg, view_call, pure_call, fallback_call, ether_transfer, creation };

/// DSL tag spelling (`trans-msg`, `ethers`, `create`).
std::string_view tag_name(MessageKind k);
std::optional<MessageKind> parse_message_tag(std::string_view tag);
/// Calls open an activation on the receiver; ether transfers do not.
bool is_call(MessageKind k);

struct Participant {
    std::string alias;
    ActorKind kind = ActorKind::person;
    /// Set when the participant is an instance of a declared contract.
    std::optional<std::string> contract;
    SourceSpan span;
    bool operator==(const Participant&) const = default;
};

struct Message {
    std::string from;
    std::string to;
    std::string label;
    MessageKind kind = MessageKind::trans_msg;
    bool dashed = false;
    SourceSpan span;
    bool operator==(const Message&) const = default;
};

struct Scenario {
    std::string name;
    std::vector<Participant> participants;
    std::vector<Message> messages;
    SourceSpan span;

    const Participant* find_participant(std::string_view alias) const;
    bool operator==(const Scenario&) const = default;
};

enum class DeclKind { contract, structure, enumeration };

/// Position of a type declaration in source order across the three lists.
struct DeclRef {
    DeclKind kind;
    std::size_t index;
    bool operator==(const DeclRef&) const = default;
};

struct SystemModel {
    std::string name;
    std::string goal;
    std::vector<ActorDecl> actors;
    std::vector<ContractDecl> contracts;
    std::vector<StructDecl> structs;
    std::vector<EnumDecl> enums;
    std::vector<DeclRef> declaration_order;
    std::vector<Scenario> scenarios;
    SourceSpan span;

    const ContractDecl* find_contract(std::string_view name) const;
    const StructDecl* find_struct(std::string_view name) const;
    const EnumDecl* find_enum(std::string_view name) const;
    const ActorDecl* find_actor(std::string_view name) const;

    void add(ContractDecl c);
    void add(StructDecl s);
    void add(EnumDecl e);

    bool operator==(const SystemModel&) const = default;
};

/// Activation state at one message of a scenario.
struct MessageActivation {
    /// False when a code-executing sender has no open activation.
    bool sender_active = true;
    /// True when the receiver already has an open activation below the sender
    /// in the current call chain (a call-back). Self-calls never count.
    bool reenters = false;
};

/// Replays the scenario against a tree of activations: a call from a
/// code-executing participant returns every activation opened above the
/// sender's innermost one, then opens one on the receiver; calls from
/// external participants start a fresh chain.
std::vector<MessageActivation> trace_activations(const Scenario& scenario);

/// Copy of `m` with every span reset, for structural comparison.
SystemModel without_spans(SystemModel m);

/// One diagnostic per violated invariant, ordered by declaration position and
/// then rule id. Empty iff the model is well formed.
std::vector<Diagnostic> validate_model(const SystemModel& model);

/// C3 linearization of `contract`, most-derived first. Throws
/// UnknownContractError, CycleError or LinearizationError.
std::vector<std::string> linearize(const SystemModel& model, const std::string& contract);

struct ResolvedFunction {
    FunctionSig sig;
    std::string defined_in;
    bool operator==(const ResolvedFunction&) const = default;
};

/// Same function name defined by two ancestors, neither deriving from the other.
struct FunctionCollision {
    std::string function;
    std::string first;   // earlier in the linearization (wins)
    std::string second;
    bool operator==(const FunctionCollision&) const = default;
};

struct EffectiveInterface {
    std::vector<ResolvedFunction> functions;
    std::vector<FunctionCollision> collisions;
};

EffectiveInterface effective_interface(const SystemModel& model, const std::string& contract);

}  // namespace abcde::model
