#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "abcde/lint_config.hpp"
#include "abcde/scaffold.hpp"

namespace abcde::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Contents of an `abcde.toml` file: INI-style sections [lint], [gas] and
/// [scaffold].
struct ToolConfig {
    LintConfig lint;
    LintConfig gas;
    ScaffoldConfig scaffold;
};

/// Parses config text. Throws ConfigError on malformed values or unknown
/// keys and rule ids.
ToolConfig parse_config(const std::string& text);

/// Loads `path`, or `abcde.toml` in the working directory when `path` is
/// empty and that file exists; defaults otherwise.
ToolConfig load_config(const std::filesystem::path& path);

}  // namespace abcde::cli
