#pragma once

#include <vector>

#include "abcde/diagnostic.hpp"
#include "abcde/lint_config.hpp"
#include "abcde/sol_ast.hpp"

namespace abcde {

/// Coding-phase checklist rules over one parsed file. Output is sorted by
/// (file, line, column, rule id); manual items come last. Throws
/// std::invalid_argument when the config names unknown rules.
std::vector<Diagnostic> lint(const sol::SourceUnit& unit, const LintConfig& config = {});

}  // namespace abcde
