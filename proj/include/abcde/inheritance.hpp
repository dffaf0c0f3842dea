#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace abcde {

/// The C3 merge has no consistent candidate (e.g. `X is A, B` and `Y is B, A`
/// both inherited by one contract).
class LinearizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CycleError : public std::runtime_error {
public:
    explicit CycleError(std::vector<std::string> cycle);
    const std::vector<std::string>& cycle() const { return cycle_; }

private:
    std::vector<std::string> cycle_;
};

class UnknownContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Returns the declared parents of a contract in source order, or nullopt if
/// the name is unknown.
using ParentLookup = std::function<std::optional<std::vector<std::string>>(const std::string&)>;

/// Solidity-flavoured C3 linearization, most-derived first. Parents are listed
/// base-most first in source, so the merge runs over them right to left.
std::vector<std::string> c3_linearize(const std::string& name, const ParentLookup& parents_of);

}  // namespace abcde
