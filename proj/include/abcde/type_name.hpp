#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace abcde {

/// A Solidity-style type expression shared by the modeling DSL and the
/// Solidity parser.
struct TypeName {
    enum class Kind { elementary, user_defined, array, mapping };

    Kind kind = Kind::elementary;
    /// Elementary keyword (`uint256`, `address`) or user-defined type path.
    std::string name;
    /// array: {element}; mapping: {key, value}.
    std::vector<TypeName> args;
    /// Fixed array length; absent for dynamic arrays.
    std::optional<std::uint64_t> length;

    static TypeName elementary(std::string name);
    static TypeName user(std::string name);
    static TypeName array_of(TypeName element, std::optional<std::uint64_t> length = std::nullopt);
    static TypeName mapping(TypeName key, TypeName value);

    bool is_mapping() const { return kind == Kind::mapping; }
    bool is_array() const { return kind == Kind::array; }
    bool is_dynamic_array() const { return kind == Kind::array && !length; }
    const TypeName& element() const { return args.at(0); }
    const TypeName& key() const { return args.at(0); }
    const TypeName& value() const { return args.at(1); }

    /// Solidity spelling: `mapping(address => uint256)`, `uint8[4]`.
    std::string to_string() const;

    bool operator==(const TypeName&) const = default;
};

/// Canonical elementary spelling, or nullopt if `word` is not an elementary
/// type keyword. Aliases are widened: `uint` -> `uint256`, `byte` -> `bytes1`.
std::optional<std::string> canonical_elementary(std::string_view word);

bool is_unsigned_integer(const TypeName& t);
bool is_signed_integer(const TypeName& t);
inline bool is_integer(const TypeName& t) { return is_unsigned_integer(t) || is_signed_integer(t); }
bool is_address(const TypeName& t);

/// Collection stereotype of a state variable, derived from its type.
enum class Collection { scalar, array, mapping, mapping_address, mapping_uint };

Collection collection_of(const TypeName& t);
std::string_view stereotype_name(Collection c);

}  // namespace abcde
