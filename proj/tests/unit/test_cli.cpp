#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include <unistd.h>

#include "cli.hpp"
#include "config.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace abcde;
using test::run_cli;

namespace {

std::string data(const std::string& rel) { return (test::data_dir() / rel).string(); }

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("abcde-cli-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST(Cli, CheckCodeCleanFileExitsZero) {
    auto r = run_cli({"check-code", data("lint/clean/txorigin.sol")});
    EXPECT_EQ(r.code, cli::kExitOk) << r.out << r.err;
}

TEST(Cli, CheckCodeTxOriginExitsOne) {
    auto r = run_cli({"check-code", data("lint/vulnerable/txorigin.sol")});
    EXPECT_EQ(r.code, cli::kExitFindings);
    EXPECT_EQ(count(r.out, "[CL-TXORIGIN]"), 1u);
    EXPECT_EQ(count(r.out, "error:"), 1u);
}

TEST(Cli, FailLevelControlsExitCode) {
    const auto file = data("lint/vulnerable/timestamp.sol");
    EXPECT_EQ(run_cli({"check-code", file}).code, cli::kExitOk);
    EXPECT_EQ(run_cli({"--fail-level", "info", "check-code", file}).code, cli::kExitFindings);
    EXPECT_EQ(run_cli({"--fail-level", "error", "check-code", data("lint/vulnerable/pragma.sol")}).code,
              cli::kExitOk);
}

TEST(Cli, DiagramClassMatchesGolden) {
    const auto out = scratch("diagram") / "out.adt";
    auto r = run_cli({"diagram", "class", data("dex.abcde"), "-o", out.string()});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(test::read_text(out), test::read_text(test::data_dir() / "golden" / "dex_class.adt"));
}

TEST(Cli, DiagramSequenceToStdout) {
    auto r = run_cli({"diagram", "sequence", data("dex.abcde"), "--scenario", "FillOrder"});
    EXPECT_EQ(r.code, cli::kExitOk);
    EXPECT_EQ(r.out, test::read_text(test::data_dir() / "golden" / "dex_sequence.adt"));
    EXPECT_EQ(run_cli({"diagram", "sequence", data("dex.abcde"), "--scenario", "Nope"}).code, cli::kExitUsage);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"check-code"}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"check-code", "/nonexistent/file.sol"}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"--fail-level", "loud", "check-code", data("lint/clean/div.sol")}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST(Cli, ParseErrorsExitTwo) {
    const auto dir = scratch("parse");
    std::ofstream(dir / "bad.sol") << "contract {";
    auto r = run_cli({"check-code", (dir / "bad.sol").string()});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("bad.sol"), std::string::npos);
}

TEST(Cli, ParseSubcommand) {
    EXPECT_EQ(run_cli({"parse", data("dex.abcde")}).code, cli::kExitOk);
    EXPECT_EQ(run_cli({"parse", data("layout/l10_dex.sol")}).code, cli::kExitOk);
}

TEST(Cli, CheckDesign) {
    auto dao = run_cli({"check-design", data("dao.abcde")});
    EXPECT_EQ(dao.code, cli::kExitFindings);
    EXPECT_EQ(count(dao.out, "[DC-REENTRANCY]"), 1u);
    EXPECT_EQ(run_cli({"check-design", data("dex.abcde")}).code, cli::kExitOk);
}

TEST(Cli, GasLayoutJson) {
    auto r = run_cli({"gas", "--layout", "--json", data("layout/l01_basic.sol")});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_NE(r.out.find("\"total_slots\""), std::string::npos);
}

TEST(Cli, ScaffoldWritesFiles) {
    const auto dir = scratch("scaffold");
    auto r = run_cli({"scaffold", data("dex.abcde"), "-o", dir.string()});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    for (const char* f : {"Exchange.sol", "Ownable.sol", "ReentrancyGuard.sol", "IERC20.sol"})
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
}

TEST(Cli, ReportRows) {
    auto design = run_cli({"report", "design", data("dex.abcde"), "--json", "--reproducible"});
    EXPECT_EQ(design.code, cli::kExitOk) << design.err;
    EXPECT_EQ(nlohmann::json::parse(design.out).at("generated_at"), "1970-01-01T00:00:00Z");
    auto coding = run_cli({"report", "coding", data("lint/vulnerable/txorigin.sol"), "--reproducible"});
    EXPECT_EQ(coding.code, cli::kExitFindings);
    EXPECT_NE(coding.out.find("[FINDINGS(1)] tx.origin"), std::string::npos);
}

TEST(Cli, ReproducibleRunsAreIdentical) {
    const std::vector<std::vector<std::string>> commands{
        {"parse", data("dex.abcde")},
        {"check-design", data("dao.abcde"), "--json"},
        {"check-code", data("lint/vulnerable/overflow.sol"), data("lint/vulnerable/multisend.sol")},
        {"gas", data("layout/l10_dex.sol"), "--layout"},
        {"diagram", "class", data("dex.abcde")},
        {"diagram", "sequence", data("dao.abcde")},
        {"report", "design", data("dao.abcde"), "--reproducible"},
        {"report", "coding", data("lint/vulnerable/txorigin.sol"), "--json", "--reproducible"},
    };
    for (const auto& cmd : commands) {
        auto a = run_cli(cmd);
        auto b = run_cli(cmd);
        EXPECT_EQ(a.code, b.code) << cmd[0];
        EXPECT_EQ(a.out, b.out) << cmd[0];
        EXPECT_FALSE(a.out.empty()) << cmd[0];
    }
}

TEST(Cli, ParallelMatchesSerial) {
    std::vector<std::string> files;
    for (const char* dir : {"lint/vulnerable", "lint/clean", "layout"})
        for (const auto& p : test::sol_files(test::data_dir() / dir)) files.push_back(p.string());
    for (const char* sub : {"check-code", "gas"}) {
        std::vector<std::string> serial{"-j", "1", sub};
        std::vector<std::string> parallel{"-j", "8", sub};
        serial.insert(serial.end(), files.begin(), files.end());
        parallel.insert(parallel.end(), files.begin(), files.end());
        auto a = run_cli(serial);
        auto b = run_cli(parallel);
        EXPECT_EQ(a.code, b.code) << sub;
        EXPECT_EQ(a.out, b.out) << sub;
    }
}

TEST(Cli, ExitCodeIsAlwaysInRange) {
    const std::vector<std::string> pool{"parse", "check-design", "check-code", "gas", "diagram", "class",
                                        "sequence", "scaffold", "report", "design", "coding", "--json",
                                        "--reproducible", "-o", "--scenario", "--fail-level", "error", "-j", "0",
                                        data("dex.abcde"), data("lint/vulnerable/div.sol"), "missing.sol", "--bogus"};
    std::mt19937 rng(47);
    const auto dir = scratch("range");
    for (int i = 0; i < 300; ++i) {
        std::vector<std::string> args;
        const int n = static_cast<int>(rng() % 6);
        for (int k = 0; k < n; ++k) {
            auto a = pool[rng() % pool.size()];
            // Keep outputs inside the scratch directory.
            if (a == "-o") {
                args.push_back(a);
                a = (dir / ("o" + std::to_string(i))).string();
            }
            args.push_back(a);
        }
        const int code = run_cli(args).code;
        EXPECT_TRUE(code == 0 || code == 1 || code == 2) << code;
    }
}

TEST(Config, ParsesSections) {
    auto c = cli::parse_config(
        "[lint]\n"
        "disabled = CL-DIV, CL-TIMESTAMP\n"
        "severity_overrides = \"CL-PRAGMA:error\"\n"
        "fail_level = info\n"
        "[gas]\n"
        "enabled = [GA-PACK]\n"
        "[scaffold]\n"
        "solidity_version = 0.5.17\n"
        "one_file_per_contract = false\n"
        "license_header = \"SPDX-License-Identifier: MIT\"\n");
    EXPECT_FALSE(c.lint.enabled("CL-DIV"));
    EXPECT_TRUE(c.lint.enabled("CL-TXORIGIN"));
    EXPECT_EQ(c.lint.severity_overrides.at("CL-PRAGMA"), Severity::error);
    EXPECT_EQ(c.lint.fail_level, Severity::info);
    EXPECT_TRUE(c.gas.enabled("GA-PACK"));
    EXPECT_FALSE(c.gas.enabled("GA-INIT"));
    EXPECT_EQ(c.scaffold.solidity_version, (std::array<int, 3>{0, 5, 17}));
    EXPECT_FALSE(c.scaffold.one_file_per_contract);
    EXPECT_EQ(c.scaffold.license_header, "SPDX-License-Identifier: MIT");
}

TEST(Config, RejectsUnknownKeysAndRules) {
    EXPECT_THROW(cli::parse_config("[lint]\ncolour = red\n"), cli::ConfigError);
    EXPECT_THROW(cli::parse_config("[other]\nx = 1\n"), cli::ConfigError);
    EXPECT_THROW(cli::parse_config("[lint]\nenabled = CL-NOPE\n"), cli::ConfigError);
    EXPECT_THROW(cli::parse_config("[lint]\nfail_level = loud\n"), cli::ConfigError);
    EXPECT_THROW(cli::parse_config("[scaffold]\nsolidity_version = ^0.5.0\n"), cli::ConfigError);
}

TEST(Config, AppliedByCli) {
    const auto dir = scratch("config");
    std::ofstream(dir / "abcde.toml") << "[lint]\ndisabled = CL-TXORIGIN\n";
    auto r = run_cli({"--config", (dir / "abcde.toml").string(), "check-code", data("lint/vulnerable/txorigin.sol")});
    EXPECT_EQ(r.code, cli::kExitOk) << r.out << r.err;
    EXPECT_EQ(r.out.find("CL-TXORIGIN"), std::string::npos);
    std::ofstream(dir / "broken.toml") << "[lint]\nnope = 1\n";
    EXPECT_EQ(run_cli({"--config", (dir / "broken.toml").string(), "check-code", data("lint/clean/div.sol")}).code,
              cli::kExitUsage);
}
