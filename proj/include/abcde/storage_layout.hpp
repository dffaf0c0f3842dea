#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "abcde/sol_ast.hpp"

namespace abcde::sol {

class UnknownTypeError : public std::runtime_error {
public:
    explicit UnknownTypeError(const std::string& type_name)
        : std::runtime_error("unknown type '" + type_name + "'"), type_name_(type_name) {}
    const std::string& type_name() const { return type_name_; }

private:
    std::string type_name_;
};

/// Storage footprint of one type.
struct StorageSize {
    std::uint32_t bytes = 32;  // size within a slot; 32 for anything taking whole slots
    std::uint64_t slots = 1;   // whole slots for types that never share
    bool packable = false;     // value type that can share a slot
};

struct LayoutEntry {
    std::string name;
    std::string contract;  // declaring contract
    std::string type;
    std::uint64_t slot = 0;
    std::uint32_t offset = 0;
    std::uint32_t size = 0;

    bool operator==(const LayoutEntry&) const = default;
};

struct StorageLayout {
    std::vector<LayoutEntry> entries;
    std::uint64_t total_slots = 0;
};

/// Footprint of `type` as seen from `scope` (used to resolve struct and enum names).
StorageSize storage_size(const TypeName& type, const ContractDef& scope, const SourceUnit& unit);

/// Layout of `contract` including inherited variables, base-most first.
/// Throws UnknownTypeError, or the inheritance errors for bad parent lists.
StorageLayout storage_layout(const ContractDef& contract, const SourceUnit& unit);

/// Same, but with the contract's own slot-taking variables in `own_order`
/// (a permutation of their names).
StorageLayout storage_layout(const ContractDef& contract, const SourceUnit& unit,
                             const std::vector<std::string>& own_order);

/// Contracts of `contract`'s linearization that are defined in `unit`,
/// most-derived first.
std::vector<const ContractDef*> linearized_contracts(const ContractDef& contract, const SourceUnit& unit);

}  // namespace abcde::sol
