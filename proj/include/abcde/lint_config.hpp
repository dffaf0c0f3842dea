#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "abcde/diagnostic.hpp"

namespace abcde {

namespace sol {
struct SourceUnit;
}

/// Rule selection shared by the lint and gas engines.
struct LintConfig {
    /// Absent means every rule.
    std::optional<std::set<std::string>> enabled_rules;
    std::map<std::string, Severity> severity_overrides;
    /// Exit-code threshold for the CLI.
    Severity fail_level = Severity::warning;

    bool enabled(std::string_view rule_id) const;
    /// Rule ids mentioned by the config that the catalog does not know.
    std::vector<std::string> unknown_rules() const;
};

/// Drops disabled and `abcde:allow`-suppressed findings, applies severity
/// overrides, and sorts by location.
void finalize(std::vector<Diagnostic>& diags, const sol::SourceUnit& unit, const LintConfig& config);

}  // namespace abcde
