#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "abcde/source.hpp"
#include "abcde/type_name.hpp"

namespace abcde::sol {

enum class ExprKind {
    identifier,
    member,       // children[0].text
    index,        // children[0][children[1]]; children[1] may be absent
    call,         // children[0](children[1..]); named call options in `options`
    binary,       // children[0] text children[1]
    unary,        // text children[0]; `prefix` tells the side
    assignment,   // children[0] text children[1]
    conditional,  // children[0] ? children[1] : children[2]
    literal,
    tuple,        // elements may be `empty`
    new_expr,     // `new` type; text holds the type
    elementary,   // elementary type used as an expression, e.g. `address` in `address(0)`
    empty,
    opaque,       // construct outside the subset
};

enum class LiteralKind { none, number, string, boolean, hex };

struct Expr {
    ExprKind kind = ExprKind::empty;
    std::string text;
    LiteralKind literal = LiteralKind::none;
    bool prefix = true;
    std::vector<Expr> children;
    std::vector<std::pair<std::string, Expr>> options;
    SourceSpan span;

    bool is_identifier(std::string_view name) const { return kind == ExprKind::identifier && text == name; }
    /// `object.member` where object is the identifier `object_name`.
    bool is_member_of(std::string_view object_name, std::string_view member_name) const;
    /// Callee of a call with any call options (`.value(x)`, `{value: x}`) peeled off.
    const Expr& callee() const;
    /// Name of the called function when the callee is an identifier.
    std::string_view call_name() const;
};

enum class StmtKind { expr, local_var, if_, for_, while_, do_while, return_, delete_, emit, block, opaque };

struct LocalVar {
    std::string name;  // empty for a skipped tuple component
    TypeName type;
    SourceSpan span;
};

struct Stmt {
    StmtKind kind = StmtKind::opaque;
    SourceSpan span;
    /// If/While/DoWhile condition, or For condition when present.
    std::optional<Expr> condition;
    /// ExprStmt expression, Return value, Delete target, Emit call, LocalVar
    /// initializer, For post-expression.
    std::optional<Expr> expr;
    std::vector<LocalVar> vars;
    /// For initializer (zero or one statement).
    std::vector<Stmt> init;
    /// Block contents, loop body, or If "then" branch (one statement).
    std::vector<Stmt> body;
    std::vector<Stmt> else_body;
};

enum class Visibility { default_, public_, external, internal, private_ };
enum class Mutability { nonpayable, payable, view, pure };

struct Param {
    std::string name;
    TypeName type;
    SourceSpan span;
};

struct VarDecl {
    std::string name;
    TypeName type_name;
    Visibility visibility = Visibility::default_;
    std::optional<Expr> initializer;
    bool is_constant = false;
    bool is_immutable = false;
    SourceSpan span;
};

struct ModifierInvocation {
    std::string name;
    std::vector<Expr> args;
    SourceSpan span;
};

struct FuncDef {
    std::string name;
    std::vector<Param> params;
    std::vector<Param> returns;
    Visibility visibility = Visibility::default_;
    Mutability mutability = Mutability::nonpayable;
    std::vector<ModifierInvocation> modifiers;
    std::optional<std::vector<Stmt>> body;
    bool is_constructor = false;
    bool is_fallback = false;
    bool is_receive = false;
    SourceSpan span;

    bool is_public_facing() const {
        return visibility == Visibility::public_ || visibility == Visibility::external ||
               visibility == Visibility::default_;
    }
};

struct ModifierDef {
    std::string name;
    std::vector<Param> params;
    std::optional<std::vector<Stmt>> body;
    SourceSpan span;
};

struct EventDef {
    std::string name;
    std::vector<Param> params;
    SourceSpan span;
};

struct StructDef {
    std::string name;
    std::vector<Param> members;
    SourceSpan span;
};

struct EnumDef {
    std::string name;
    std::vector<std::string> values;
    SourceSpan span;
};

struct UsingFor {
    std::string library;
    /// Absent for `using L for *;`.
    std::optional<TypeName> target;
};

enum class ContractKind { contract, interface, library };

struct ContractDef {
    std::string name;
    ContractKind kind = ContractKind::contract;
    bool is_abstract = false;
    std::vector<std::string> parents;
    std::vector<VarDecl> state_vars;
    std::vector<FuncDef> functions;
    std::vector<ModifierDef> modifiers;
    std::vector<EventDef> events;
    std::vector<StructDef> structs;
    std::vector<EnumDef> enums;
    std::vector<UsingFor> using_declarations;
    SourceSpan span;

    const FuncDef* fallback() const;
};

struct PragmaDirective {
    std::string raw;  // constraint text after `pragma solidity`
    bool locked = false;
    std::optional<std::array<int, 3>> version;
    /// Lowest version the constraint admits, when determinable.
    std::optional<std::array<int, 3>> min_version;
    SourceSpan span;
};

/// Parses a `pragma solidity` constraint string such as `^0.5.0` or `=0.5.16`.
PragmaDirective parse_pragma_constraint(std::string raw);

struct SourceUnit {
    std::string file;
    std::optional<PragmaDirective> pragma;
    std::vector<std::string> imports;
    std::vector<ContractDef> contracts;
    std::vector<StructDef> structs;  // file-level (0.6+)
    std::vector<EnumDef> enums;      // file-level (0.6+)
    /// Line number -> rule ids allowed on that line by `// abcde:allow(...)`.
    std::map<std::uint32_t, std::set<std::string>> suppressions;

    const ContractDef* find_contract(std::string_view name) const;
    bool suppressed(const std::string& rule_id, std::uint32_t line) const;
};

}  // namespace abcde::sol
