#include "sol_lexer.hpp"

#include <array>
#include <cctype>
#include <regex>

namespace abcde::sol::detail {

namespace {

constexpr std::array<std::string_view, 30> kOperators = {
    ">>>=", ">>>", "<<=", ">>=", "**", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=",
    "*=", "/=", "%=", "|=", "&=", "^=", "=>", "<<", ">>", "->", ":=", "+", "-", "*", "/",
};
constexpr std::string_view kSingleOps = "%<>=!~&|^?:;,.()[]{}";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

void scan_suppression(std::string_view comment, std::uint32_t line,
                      std::map<std::uint32_t, std::set<std::string>>& out) {
    static const std::regex kAllow(R"(abcde:allow\(([^)]*)\))");
    std::string text(comment);
    for (std::sregex_iterator it(text.begin(), text.end(), kAllow), end; it != end; ++it) {
        std::string list = (*it)[1].str();
        std::size_t start = 0;
        while (start <= list.size()) {
            std::size_t comma = list.find(',', start);
            if (comma == std::string::npos) comma = list.size();
            std::string id = list.substr(start, comma - start);
            id.erase(0, id.find_first_not_of(" \t"));
            id.erase(id.find_last_not_of(" \t") + 1);
            if (!id.empty()) out[line + 1].insert(id);
            start = comma + 1;
        }
    }
}

}  // namespace

LexResult lex(std::string_view src, const std::string& file) {
    LexResult r;
    std::uint32_t line = 1, col = 1;
    std::size_t i = 0;

    auto advance_to = [&](std::size_t end) {
        for (; i < end && i < src.size(); ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto error = [&](std::string expected, std::string found) {
        r.errors.push_back({SourceSpan{file, line, col, 1}, std::move(expected), std::move(found)});
    };
    auto push = [&](Tok kind, std::string text, std::size_t end) {
        Token t{kind, std::move(text), SourceSpan{file, line, col, static_cast<std::uint32_t>(end - i)}, i, end - i};
        advance_to(end);
        r.tokens.push_back(std::move(t));
    };
    // Reads a quoted string starting at `start` (the quote); returns end index or npos.
    auto read_string = [&](std::size_t start, std::string& value) -> std::size_t {
        const char quote = src[start];
        std::size_t j = start + 1;
        while (j < src.size()) {
            const char c = src[j];
            if (c == quote) return j + 1;
            if (c == '\n') return std::string_view::npos;
            if (c == '\\' && j + 1 < src.size()) {
                const char e = src[j + 1];
                switch (e) {
                case 'n': value += '\n'; break;
                case 't': value += '\t'; break;
                case 'r': value += '\r'; break;
                case 'x':
                    if (j + 3 < src.size() && std::isxdigit(static_cast<unsigned char>(src[j + 2])) &&
                        std::isxdigit(static_cast<unsigned char>(src[j + 3]))) {
                        value += static_cast<char>(std::stoi(std::string(src.substr(j + 2, 2)), nullptr, 16));
                        j += 4;
                        continue;
                    }
                    value += e;
                    break;
                default: value += e;
                }
                j += 2;
                continue;
            }
            value += c;
            ++j;
        }
        return std::string_view::npos;
    };

    while (i < src.size() && r.errors.empty()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
            advance_to(i + 1);
        } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            std::size_t end = src.find('\n', i);
            if (end == std::string_view::npos) end = src.size();
            scan_suppression(src.substr(i, end - i), line, r.suppressions);
            advance_to(end);
        } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            std::size_t end = src.find("*/", i + 2);
            if (end == std::string_view::npos) {
                error("'*/'", "end of input");
                break;
            }
            advance_to(end + 2);
        } else if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            std::string word(src.substr(i, j - i));
            if ((word == "hex" || word == "unicode") && j < src.size() && (src[j] == '"' || src[j] == '\'')) {
                std::string value;
                std::size_t end = read_string(j, value);
                if (end == std::string_view::npos) {
                    error("closing quote", "end of line");
                    break;
                }
                push(word == "hex" ? Tok::hex_string : Tok::string, std::move(value), end);
            } else {
                push(Tok::ident, std::move(word), j);
            }
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i;
            if (c == '0' && j + 1 < src.size() && (src[j + 1] == 'x' || src[j + 1] == 'X')) {
                j += 2;
                while (j < src.size() && (std::isxdigit(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            } else {
                while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                                          src[j] == '.'))
                    ++j;
                if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                    std::size_t k = j + 1;
                    if (k < src.size() && src[k] == '-') ++k;
                    if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                        j = k;
                        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                    }
                }
            }
            if (j < src.size() && ident_char(src[j])) {
                error("number", "'" + std::string(src.substr(i, j - i + 1)) + "'");
                break;
            }
            push(Tok::number, std::string(src.substr(i, j - i)), j);
        } else if (c == '"' || c == '\'') {
            std::string value;
            std::size_t end = read_string(i, value);
            if (end == std::string_view::npos) {
                error("closing quote", "end of line");
                break;
            }
            push(Tok::string, std::move(value), end);
        } else {
            std::string_view op;
            for (auto candidate : kOperators)
                if (src.substr(i, candidate.size()) == candidate) {
                    op = candidate;
                    break;
                }
            if (op.empty() && kSingleOps.find(c) != std::string_view::npos) op = src.substr(i, 1);
            if (op.empty()) {
                auto uc = static_cast<unsigned char>(c);
                std::string shown = uc < 0x20 || uc >= 0x7f ? "byte 0x" + [&] {
                    const char* hex = "0123456789abcdef";
                    return std::string{hex[uc >> 4], hex[uc & 15]};
                }() : "'" + std::string(1, c) + "'";
                error("token", shown);
                break;
            }
            push(Tok::op, std::string(op), i + op.size());
        }
    }
    r.tokens.push_back(Token{Tok::end, "", SourceSpan{file, line, col, 0}, src.size(), 0});

    if (!r.errors.empty()) return r;
    std::vector<std::size_t> stack;
    for (std::size_t k = 0; k < r.tokens.size(); ++k) {
        const Token& t = r.tokens[k];
        if (t.kind != Tok::op || t.text.size() != 1) continue;
        const char ch = t.text[0];
        if (ch == '(' || ch == '[' || ch == '{') {
            stack.push_back(k);
        } else if (ch == ')' || ch == ']' || ch == '}') {
            const char want = ch == ')' ? '(' : ch == ']' ? '[' : '{';
            if (stack.empty() || r.tokens[stack.back()].text[0] != want) {
                r.errors.push_back({t.span, stack.empty() ? "declaration" : "matching bracket",
                                    "unbalanced '" + t.text + "'"});
                return r;
            }
            r.partner[stack.back()] = k;
            stack.pop_back();
        }
    }
    if (!stack.empty()) {
        const Token& open = r.tokens[stack.back()];
        r.errors.push_back({open.span, "closing bracket for '" + open.text + "'", "end of input"});
    }
    return r;
}

}  // namespace abcde::sol::detail
