#include "abcde/type_name.hpp"

#include <charconv>

namespace abcde {

TypeName TypeName::elementary(std::string name) { return {Kind::elementary, std::move(name), {}, {}}; }

TypeName TypeName::user(std::string name) { return {Kind::user_defined, std::move(name), {}, {}}; }

TypeName TypeName::array_of(TypeName element, std::optional<std::uint64_t> length) {
    return {Kind::array, {}, {std::move(element)}, length};
}

TypeName TypeName::mapping(TypeName key, TypeName value) {
    return {Kind::mapping, {}, {std::move(key), std::move(value)}, {}};
}

std::string TypeName::to_string() const {
    switch (kind) {
    case Kind::elementary:
    case Kind::user_defined: return name;
    case Kind::array:
        return element().to_string() + "[" + (length ? std::to_string(*length) : std::string()) + "]";
    case Kind::mapping:
        return "mapping(" + key().to_string() + " => " + value().to_string() + ")";
    }
    return name;
}

namespace {

// Parses the numeric suffix of `word` after `prefix`; returns 0 if absent.
std::optional<int> suffix_number(std::string_view word, std::string_view prefix) {
    if (!word.starts_with(prefix)) return std::nullopt;
    auto digits = word.substr(prefix.size());
    if (digits.empty()) return 0;
    if (digits.front() == '0') return std::nullopt;
    int n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
    return n;
}

}  // namespace

std::optional<std::string> canonical_elementary(std::string_view word) {
    if (word == "address" || word == "bool" || word == "string" || word == "bytes")
        return std::string(word);
    if (word == "byte") return std::string("bytes1");
    for (std::string_view prefix : {"uint", "int"}) {
        if (auto n = suffix_number(word, prefix)) {
            if (*n == 0) return std::string(prefix) + "256";
            if (*n % 8 == 0 && *n <= 256) return std::string(word);
            return std::nullopt;
        }
    }
    if (auto n = suffix_number(word, "bytes")) {
        if (*n >= 1 && *n <= 32) return std::string(word);
    }
    return std::nullopt;
}

bool is_unsigned_integer(const TypeName& t) {
    return t.kind == TypeName::Kind::elementary && t.name.starts_with("uint");
}

bool is_signed_integer(const TypeName& t) {
    return t.kind == TypeName::Kind::elementary && t.name.starts_with("int");
}

bool is_address(const TypeName& t) {
    return t.kind == TypeName::Kind::elementary &&
           (t.name == "address" || t.name == "address payable");
}

Collection collection_of(const TypeName& t) {
    if (t.is_array()) return Collection::array;
    if (!t.is_mapping()) return Collection::scalar;
    if (is_address(t.key())) return Collection::mapping_address;
    if (is_unsigned_integer(t.key())) return Collection::mapping_uint;
    return Collection::mapping;
}

std::string_view stereotype_name(Collection c) {
    switch (c) {
    case Collection::scalar: return "";
    case Collection::array: return "array";
    case Collection::mapping: return "mapping";
    case Collection::mapping_address: return "mapping [address]";
    case Collection::mapping_uint: return "mapping [uint]";
    }
    return "";
}

}  // namespace abcde
