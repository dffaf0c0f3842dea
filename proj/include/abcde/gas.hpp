#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abcde/diagnostic.hpp"
#include "abcde/lint_config.hpp"
#include "abcde/sol_ast.hpp"
#include "abcde/storage_layout.hpp"

namespace abcde {

struct PackingSuggestion {
    std::string contract;
    std::uint64_t current_slots = 0;
    std::uint64_t achievable_slots = 0;
    /// The contract's own packable variables in suggested declaration order.
    std::vector<std::string> suggested_order;
    /// All of the contract's own slot-taking variables in suggested order;
    /// storage_layout over this order yields achievable_slots.
    std::vector<std::string> full_order;
};

/// Reorders the contract's own value-type variables to use fewer slots.
/// Variables that take whole slots keep their relative order after the
/// packed ones. Propagates storage_layout errors.
PackingSuggestion suggest_packing(const sol::ContractDef& contract, const sol::SourceUnit& unit);

/// GAS-pattern rules. Sorted like lint output; manual items come last.
std::vector<Diagnostic> analyze_gas(const sol::SourceUnit& unit, const LintConfig& config = {});

/// `{contract, slots:[{name, slot, offset, size}], total_slots, achievable_slots}`
std::string layout_json(const sol::ContractDef& contract, const sol::SourceUnit& unit);

}  // namespace abcde
