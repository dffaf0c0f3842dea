#pragma once

#include <string>
#include <string_view>

#include "abcde/model.hpp"
#include "abcde/source.hpp"

namespace abcde::dsl {

/// Parses the textual modeling language. On failure, reports the first error
/// of every top-level declaration that could not be parsed, recovering at the
/// next declaration keyword.
ParseResult<model::SystemModel> parse_model(std::string_view text, const std::string& file);

/// Canonical text for `model`; `parse_model(format_model(m))` reproduces `m`
/// up to source spans.
std::string format_model(const model::SystemModel& model);

}  // namespace abcde::dsl
