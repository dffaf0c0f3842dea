#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abcde/diagnostic.hpp"

namespace abcde {

enum class Phase { design, coding };

std::string_view to_string(Phase p);

enum class RuleClass { automatic, conditional_manual, unconditional_manual };

enum class Engine { model, design, lint, gas };

struct RuleInfo {
    std::string_view id;
    Engine engine;
    Severity severity;
    RuleClass classification;
    /// Title of the checklist row this rule reports under; empty for rules
    /// that belong to no row (model validation, GAS patterns).
    std::string_view checklist_row;
    /// Phase whose checklist contains `checklist_row`.
    std::optional<Phase> row_phase;
    std::set<PatternId> patterns;
    std::string_view summary;
};

/// Every rule the toolchain can emit.
std::span<const RuleInfo> rule_catalog();
const RuleInfo* find_rule(std::string_view id);

/// Builds a diagnostic pre-filled from the catalog entry for `id`.
Diagnostic make_diagnostic(std::string_view id, std::string message);

struct ChecklistRow {
    std::string_view title;
    std::vector<std::string_view> rule_ids;
};

/// Rows of the design (9) or coding (13) checklist, in published order.
std::span<const ChecklistRow> checklist_rows(Phase phase);

}  // namespace abcde
