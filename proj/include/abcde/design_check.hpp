#pragma once

#include <vector>

#include "abcde/diagnostic.hpp"
#include "abcde/model.hpp"

namespace abcde {

/// Design-phase checklist over a well-formed model (validate_model empty).
/// Findings come in contract order, then scenario order, then model-wide
/// findings, then manual items; ties break on rule id.
std::vector<Diagnostic> check_design(const model::SystemModel& model);

}  // namespace abcde
