#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "abcde/source.hpp"

namespace abcde::sol::detail {

enum class Tok { ident, number, string, hex_string, op, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;  // decoded value for strings
    SourceSpan span;
    std::size_t offset = 0;
    std::size_t length = 0;
};

struct LexResult {
    std::vector<Token> tokens;  // always ends with Tok::end
    /// For each opening bracket token, the index of its partner.
    std::map<std::size_t, std::size_t> partner;
    std::vector<ParseError> errors;
    std::map<std::uint32_t, std::set<std::string>> suppressions;
};

LexResult lex(std::string_view src, const std::string& file);

}  // namespace abcde::sol::detail
