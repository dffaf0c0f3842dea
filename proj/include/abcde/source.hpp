#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace abcde {

/// Location of a token or declaration in an input file. Lines and columns are
/// 1-based; columns count bytes.
struct SourceSpan {
    std::string file;
    std::uint32_t line = 1;
    std::uint32_t column = 1;
    std::uint32_t length = 0;

    bool operator==(const SourceSpan&) const = default;
    auto operator<=>(const SourceSpan&) const = default;
};

struct ParseError {
    SourceSpan span;
    std::string expected;
    std::string found;

    std::string to_string() const;
    bool operator==(const ParseError&) const = default;
};

/// Either a parsed value or the list of errors that prevented it. Never both.
template <class T>
class ParseResult {
public:
    ParseResult(T value) : state_(std::move(value)) {}
    ParseResult(std::vector<ParseError> errors) : state_(std::move(errors)) {}

    bool ok() const { return std::holds_alternative<T>(state_); }
    explicit operator bool() const { return ok(); }

    const T& value() const& { return std::get<T>(state_); }
    T& value() & { return std::get<T>(state_); }
    T&& value() && { return std::get<T>(std::move(state_)); }

    const std::vector<ParseError>& errors() const {
        static const std::vector<ParseError> kNone;
        if (auto* e = std::get_if<std::vector<ParseError>>(&state_)) return *e;
        return kNone;
    }

private:
    std::variant<T, std::vector<ParseError>> state_;
};

}  // namespace abcde
