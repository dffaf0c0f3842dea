#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "abcde/catalog.hpp"
#include "abcde/diagnostic.hpp"

namespace abcde {

enum class RowStatus { pass, findings, manual };
std::string_view to_string(RowStatus s);

struct ReportRow {
    std::string title;
    std::vector<std::string> rule_ids;
    RowStatus status = RowStatus::pass;
    /// Diagnostics of automated rules; the row passes iff zero.
    std::size_t findings = 0;
    std::vector<Diagnostic> diagnostics;
};

struct ChecklistReport {
    Phase phase = Phase::design;
    std::vector<ReportRow> rows;
    /// Diagnostics whose rule reports under no row of this phase.
    std::vector<Diagnostic> additional;
    std::string generated_at;
    std::string tool_version;
};

/// Groups diagnostics under the rows of the phase's checklist, in checklist
/// order. Rows whose rules are all manual get status manual.
ChecklistReport build_report(Phase phase, const std::vector<Diagnostic>& diagnostics, std::string generated_at = {});

std::string render_text(const ChecklistReport& report);
std::string render_json(const ChecklistReport& report);

/// JSON object for one diagnostic, as used in reports and `--json` output.
std::string diagnostic_json(const Diagnostic& d);

/// Version string of the toolchain.
std::string_view tool_version();

}  // namespace abcde
