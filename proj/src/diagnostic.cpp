#include "abcde/diagnostic.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <tuple>

namespace abcde {

std::string ParseError::to_string() const {
    std::ostringstream os;
    os << span.file << ':' << span.line << ':' << span.column << ": error: expected " << expected
       << ", found " << found;
    return os.str();
}

std::string_view to_string(Severity s) {
    switch (s) {
    case Severity::info: return "info";
    case Severity::warning: return "warning";
    case Severity::error: return "error";
    case Severity::manual: return "manual";
    }
    return "?";
}

std::optional<Severity> parse_severity(std::string_view text) {
    for (auto s : {Severity::info, Severity::warning, Severity::error, Severity::manual})
        if (to_string(s) == text) return s;
    return std::nullopt;
}

bool at_or_above(Severity s, Severity level) {
    if (s == Severity::manual) return false;
    return static_cast<int>(s) >= static_cast<int>(level);
}

namespace {
constexpr std::array<std::string_view, 15> kPatternNames = {
    "CEI", "ES", "SB", "RL", "MU", "BL", "GC", "WF", "AU", "OR", "RN", "TC", "TE", "MH", "PD"};
}

std::string_view to_string(PatternId p) { return kPatternNames[static_cast<std::size_t>(p)]; }

std::optional<PatternId> parse_pattern(std::string_view text) {
    for (std::size_t i = 0; i < kPatternNames.size(); ++i)
        if (kPatternNames[i] == text) return static_cast<PatternId>(i);
    return std::nullopt;
}

void sort_by_location(std::vector<Diagnostic>& diags) {
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        if (a.span.has_value() != b.span.has_value()) return a.span.has_value();
        if (a.span && b.span) {
            auto ka = std::tie(a.span->file, a.span->line, a.span->column);
            auto kb = std::tie(b.span->file, b.span->line, b.span->column);
            if (ka != kb) return ka < kb;
        }
        if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
        return a.message < b.message;
    });
}

std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream os;
    if (d.span) os << d.span->file << ':' << d.span->line << ':' << d.span->column << ": ";
    else if (!d.path.empty()) os << d.path << ": ";
    os << to_string(d.severity) << ": [" << d.rule_id << "] " << d.message;
    return os.str();
}

}  // namespace abcde
