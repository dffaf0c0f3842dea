#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "abcde/model.hpp"
#include "abcde/sol_ast.hpp"

namespace abcde::test {

std::filesystem::path data_dir();
std::string read_text(const std::filesystem::path& path);

/// Parses a fixture under data_dir(); throws std::runtime_error with the
/// parse errors on failure.
model::SystemModel load_model(const std::string& relative);
sol::SourceUnit load_sol(const std::filesystem::path& path);

/// Random model that the DSL can express. Names are unique per kind and
/// never collide with keywords; nothing guarantees validity.
model::SystemModel random_model(std::mt19937& rng);

/// Random scenario over a fixed cast of people, contracts and oracles, with
/// 1..max_messages messages of any kind.
model::Scenario random_scenario(std::mt19937& rng, std::size_t max_messages);

/// Explicit call-stack replay: per message, true when the receiver is
/// re-entered by a call-back.
std::vector<bool> reentrancy_oracle(const model::Scenario& scenario);

/// Textbook C3 over `parents` (each list base-most first, as written in
/// Solidity). Empty result when no linearization exists. Most-derived first.
std::vector<std::string> c3_oracle(const std::string& name,
                                   const std::map<std::string, std::vector<std::string>>& parents);

/// Fewest slots any ordering of the contract's own variables can reach,
/// found by trying every distinct ordering.
std::uint64_t packing_oracle(const sol::ContractDef& contract, const sol::SourceUnit& unit);
/// Number of own variables that can share a slot.
std::size_t packable_count(const sol::ContractDef& contract, const sol::SourceUnit& unit);

struct SeededFinding {
    std::string file;  // path of the vulnerable fixture
    std::string rule;
    std::uint32_t line = 0;
    std::uint32_t column = 0;
};

/// Lint corpus manifest with anchors resolved to 1-based line and column
/// by plain text search.
std::vector<SeededFinding> lint_manifest();
std::vector<std::filesystem::path> sol_files(const std::filesystem::path& dir);

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};
CliResult run_cli(std::vector<std::string> args);

}  // namespace abcde::test
