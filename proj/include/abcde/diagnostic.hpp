#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "abcde/source.hpp"

namespace abcde {

enum class Severity { info, warning, error, manual };

std::string_view to_string(Severity s);
std::optional<Severity> parse_severity(std::string_view text);

/// True when `s` counts toward a CI failure threshold of `level`. Manual items
/// never do.
bool at_or_above(Severity s, Severity level);

/// Security and GAS pattern identifiers, in catalog order.
enum class PatternId { CEI, ES, SB, RL, MU, BL, GC, WF, AU, OR, RN, TC, TE, MH, PD };

inline constexpr PatternId kAllPatterns[] = {
    PatternId::CEI, PatternId::ES, PatternId::SB, PatternId::RL, PatternId::MU,
    PatternId::BL,  PatternId::GC, PatternId::WF, PatternId::AU, PatternId::OR,
    PatternId::RN,  PatternId::TC, PatternId::TE, PatternId::MH, PatternId::PD,
};

std::string_view to_string(PatternId p);
std::optional<PatternId> parse_pattern(std::string_view text);

struct Diagnostic {
    std::string rule_id;
    Severity severity = Severity::warning;
    /// Absent for manual items and for findings on programmatically built models.
    std::optional<SourceSpan> span;
    /// Dotted model path (`Exchange.functions.fillOrder`) for model findings.
    std::string path;
    std::string message;
    std::string checklist_ref;
    std::set<PatternId> patterns;

    bool operator==(const Diagnostic&) const = default;
};

/// Sort key for code diagnostics: (file, line, column, rule id); span-less
/// items go last, ordered by rule id.
void sort_by_location(std::vector<Diagnostic>& diags);

/// `file:line:col: severity: [RULE] message` or `severity: [RULE] message`.
std::string format_diagnostic(const Diagnostic& d);

}  // namespace abcde
