#pragma once

#include <array>
#include <map>
#include <string>

#include "abcde/model.hpp"

namespace abcde {

struct ScaffoldConfig {
    std::array<int, 3> solidity_version{0, 5, 16};
    bool one_file_per_contract = true;
    /// Emitted at the top of every file; lines not already comments get `// `.
    std::string license_header;
};

/// Solidity skeletons for a well-formed model, keyed by file name
/// (`<Contract>.sol`, or `<System>.sol` when everything goes in one file).
/// Function stubs revert; view and pure stubs return default values.
std::map<std::string, std::string> generate_solidity(const model::SystemModel& model,
                                                     const ScaffoldConfig& config = {});

}  // namespace abcde
