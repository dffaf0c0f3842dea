#include "config.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "abcde/catalog.hpp"

namespace abcde::cli {

namespace {

namespace pt = boost::property_tree;

/// Drops one pair of surrounding double quotes, so TOML-style strings work.
std::string unquote(std::string v) {
    boost::trim(v);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    return v;
}

/// `A, B` or TOML-style `["A", "B"]`.
std::vector<std::string> split_list(std::string value) {
    boost::trim(value);
    if (value.size() >= 2 && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
    std::vector<std::string> items;
    boost::split(items, value, boost::is_any_of(","));
    for (auto& i : items) i = unquote(i);
    std::erase_if(items, [](const std::string& s) { return s.empty(); });
    return items;
}

Severity parse_level(const std::string& text, const std::string& key) {
    auto s = parse_severity(boost::trim_copy(text));
    if (!s || *s == Severity::manual) throw ConfigError(key + ": expected error, warning or info, got '" + text + "'");
    return *s;
}

bool parse_bool(const std::string& text, const std::string& key) {
    const std::string v = boost::to_lower_copy(boost::trim_copy(text));
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

/// [lint] and [gas] share these keys.
void read_rules(const pt::ptree& section, const std::string& name, Engine engine, LintConfig& out) {
    std::set<std::string> engine_rules;
    for (const auto& r : rule_catalog())
        if (r.engine == engine) engine_rules.insert(std::string(r.id));
    auto check_rule = [&](const std::string& id, const std::string& key) {
        if (!engine_rules.count(id)) throw ConfigError(name + "." + key + ": unknown rule '" + id + "'");
    };
    for (const auto& [key, node] : section) {
        const std::string value = unquote(node.get_value<std::string>());
        if (key == "enabled") {
            std::set<std::string> ids;
            for (const auto& id : split_list(value)) {
                check_rule(id, key);
                ids.insert(id);
            }
            out.enabled_rules = ids;
        } else if (key == "disabled") {
            if (!out.enabled_rules) out.enabled_rules = engine_rules;
            for (const auto& id : split_list(value)) {
                check_rule(id, key);
                out.enabled_rules->erase(id);
            }
        } else if (key == "severity_overrides") {
            for (const auto& item : split_list(value)) {
                const auto colon = item.find(':');
                if (colon == std::string::npos)
                    throw ConfigError(name + ".severity_overrides: expected RULE:level, got '" + item + "'");
                const std::string id = boost::trim_copy(item.substr(0, colon));
                check_rule(id, key);
                out.severity_overrides[id] = parse_level(item.substr(colon + 1), name + ".severity_overrides");
            }
        } else if (key == "fail_level") {
            out.fail_level = parse_level(value, name + ".fail_level");
        } else {
            throw ConfigError("unknown key '" + name + "." + key + "'");
        }
    }
}

void read_scaffold(const pt::ptree& section, ScaffoldConfig& out) {
    static const std::regex kExact(R"(\s*(\d+)\.(\d+)\.(\d+)\s*)");
    for (const auto& [key, node] : section) {
        const std::string value = unquote(node.get_value<std::string>());
        if (key == "solidity_version") {
            std::smatch m;
            if (!std::regex_match(value, m, kExact))
                throw ConfigError("scaffold.solidity_version: expected an exact version such as 0.5.16, got '" + value +
                                  "'");
            out.solidity_version = {std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3])};
        } else if (key == "one_file_per_contract") {
            out.one_file_per_contract = parse_bool(value, "scaffold.one_file_per_contract");
        } else if (key == "license_header") {
            out.license_header = value;
        } else {
            throw ConfigError("unknown key 'scaffold." + key + "'");
        }
    }
}

}  // namespace

ToolConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
    }
    ToolConfig cfg;
    for (const auto& [name, section] : tree) {
        if (section.empty() && !section.data().empty()) throw ConfigError("key '" + name + "' outside a section");
        if (name == "lint") read_rules(section, name, Engine::lint, cfg.lint);
        else if (name == "gas") read_rules(section, name, Engine::gas, cfg.gas);
        else if (name == "scaffold") read_scaffold(section, cfg.scaffold);
        else throw ConfigError("unknown section [" + name + "]");
    }
    return cfg;
}

ToolConfig load_config(const std::filesystem::path& path) {
    std::filesystem::path file = path;
    if (file.empty()) {
        if (!std::filesystem::exists("abcde.toml")) return {};
        file = "abcde.toml";
    }
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config file '" + file.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str());
    } catch (const ConfigError& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
}

}  // namespace abcde::cli
