#pragma once

// Name and type resolution inside one contract, enough for the syntactic
// rules: which identifiers are state variables, and the declared type of an
// expression when it follows from declarations alone.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "abcde/sol_ast.hpp"

namespace abcde::sol {

class ContractScope {
public:
    ContractScope(const ContractDef& contract, const SourceUnit& unit);

    const ContractDef& contract() const { return contract_; }
    const SourceUnit& unit() const { return unit_; }
    /// Contracts of the linearization found in the unit, most-derived first.
    const std::vector<const ContractDef*>& chain() const { return chain_; }

    const VarDecl* state_var(const std::string& name) const;
    const StructDef* find_struct(const std::string& name) const;
    const FuncDef* find_function(const std::string& name) const;
    bool is_contract_name(const std::string& name) const;
    /// Types covered by a `using L for T` whose library looks like checked math.
    bool has_safe_math_for(const TypeName& t) const;
    /// The contract is itself such a library.
    bool is_safe_math_library() const;

private:
    const ContractDef& contract_;
    const SourceUnit& unit_;
    std::vector<const ContractDef*> chain_;
    std::map<std::string, const VarDecl*> state_;
};

/// Locals and parameters of one function or modifier on top of a ContractScope.
class LocalScope {
public:
    LocalScope(const ContractScope& contract, const std::vector<Param>& params, const std::vector<Param>& returns,
               const std::optional<std::vector<Stmt>>& body);
    explicit LocalScope(const ContractScope& contract);

    const ContractScope& contract() const { return contract_; }
    bool is_local(const std::string& name) const { return locals_.count(name) > 0; }
    bool is_param(const std::string& name) const { return params_.count(name) > 0; }
    const std::set<std::string>& param_names() const { return param_names_; }
    /// State variable that `name` denotes here, unless shadowed.
    const VarDecl* state_var(const std::string& name) const;
    /// True when `e` designates (part of) a non-constant state variable.
    bool is_storage_ref(const Expr& e) const;

    /// Declared type of `e`, when it follows from declarations. Number
    /// literals get uint256 and set `*literal`.
    std::optional<TypeName> type_of(const Expr& e, bool* literal = nullptr) const;

private:
    const ContractScope& contract_;
    std::map<std::string, TypeName> locals_;
    std::map<std::string, TypeName> params_;
    std::set<std::string> param_names_;
};

}  // namespace abcde::sol
