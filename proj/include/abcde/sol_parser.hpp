#pragma once

#include <string>
#include <string_view>

#include "abcde/sol_ast.hpp"

namespace abcde::sol {

/// Parses the supported Solidity subset. Lexical errors, unbalanced brackets
/// and malformed contract members are errors; unsupported statements inside
/// function bodies become opaque statements instead.
ParseResult<SourceUnit> parse_solidity(std::string_view text, const std::string& file);

}  // namespace abcde::sol
