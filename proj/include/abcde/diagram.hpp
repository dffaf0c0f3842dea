#pragma once

#include <string>
#include <vector>

#include "abcde/model.hpp"

namespace abcde {

struct DiagramText {
    std::vector<std::string> lines;

    /// Lines joined with LF, each terminated.
    std::string str() const;
    bool operator==(const DiagramText&) const = default;
};

/// Class diagram of every contract, interface, library, struct and enum in
/// declaration order, followed by inheritance and association edges.
DiagramText class_diagram(const model::SystemModel& model);

/// Participants in declaration order, then one line per message.
DiagramText sequence_diagram(const model::Scenario& scenario);

}  // namespace abcde
