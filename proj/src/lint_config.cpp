#include "abcde/lint_config.hpp"

#include <algorithm>

#include "abcde/catalog.hpp"
#include "abcde/sol_ast.hpp"

namespace abcde {

bool LintConfig::enabled(std::string_view rule_id) const {
    return !enabled_rules || enabled_rules->count(std::string(rule_id)) > 0;
}

std::vector<std::string> LintConfig::unknown_rules() const {
    std::set<std::string> unknown;
    if (enabled_rules)
        for (const auto& id : *enabled_rules)
            if (!find_rule(id)) unknown.insert(id);
    for (const auto& [id, sev] : severity_overrides)
        if (!find_rule(id)) unknown.insert(id);
    return {unknown.begin(), unknown.end()};
}

void finalize(std::vector<Diagnostic>& diags, const sol::SourceUnit& unit, const LintConfig& config) {
    std::erase_if(diags, [&](const Diagnostic& d) {
        return !config.enabled(d.rule_id) || (d.span && unit.suppressed(d.rule_id, d.span->line));
    });
    for (auto& d : diags) {
        auto it = config.severity_overrides.find(d.rule_id);
        if (it != config.severity_overrides.end()) d.severity = it->second;
    }
    sort_by_location(diags);
}

}  // namespace abcde
