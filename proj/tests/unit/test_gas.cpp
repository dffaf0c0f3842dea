#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "abcde/gas.hpp"
#include "abcde/sol_parser.hpp"
#include "abcde/storage_layout.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace abcde;
using namespace abcde::sol;

namespace {

SourceUnit parse(const std::string& text) {
    auto r = parse_solidity(text, "g.sol");
    if (!r.ok()) throw std::runtime_error(r.errors().front().to_string());
    return r.value();
}

PackingSuggestion pack(const std::string& text, const std::string& contract = "C") {
    auto u = parse(text);
    return suggest_packing(*u.find_contract(contract), u);
}

std::vector<std::string> ids(const std::vector<Diagnostic>& ds, bool include_manual = false) {
    std::vector<std::string> out;
    for (const auto& d : ds)
        if (include_manual || d.severity != Severity::manual) out.push_back(d.rule_id);
    return out;
}

std::vector<Diagnostic> gas(const std::string& text) { return analyze_gas(parse(text)); }

void check_against_oracle(const ContractDef& c, const SourceUnit& u, const std::string& where) {
    const auto s = suggest_packing(c, u);
    EXPECT_EQ(s.achievable_slots, test::packing_oracle(c, u)) << where;
    EXPECT_LE(s.achievable_slots, s.current_slots) << where;
    EXPECT_EQ(storage_layout(c, u, s.full_order).total_slots, s.achievable_slots) << where;
}

}  // namespace

TEST(SuggestPacking, SmallIntsAroundWord) {
    auto s = pack("contract C { uint8 a; uint256 b; uint8 c; }");
    EXPECT_EQ(s.current_slots, 3u);
    EXPECT_EQ(s.achievable_slots, 2u);
    const std::vector<std::vector<std::string>> accepted{{"b", "a", "c"}, {"a", "c", "b"}};
    EXPECT_NE(std::find(accepted.begin(), accepted.end(), s.full_order), accepted.end());
}

TEST(SuggestPacking, AlreadyOptimal) {
    auto s = pack("contract C { uint128 a; uint128 b; }");
    EXPECT_EQ(s.current_slots, 1u);
    EXPECT_EQ(s.achievable_slots, 1u);
}

TEST(SuggestPacking, NoStateVars) {
    auto s = pack("contract C { }");
    EXPECT_EQ(s.current_slots, 0u);
    EXPECT_EQ(s.achievable_slots, 0u);
    EXPECT_TRUE(s.full_order.empty());
}

TEST(SuggestPacking, FirstFitDecreasingMisses) {
    // Sizes where plain first-fit-decreasing needs 3 slots but 2 suffice.
    auto s = pack("contract C { bytes12 a; bytes12 b; bytes10 c; bytes10 d; bytes10 e; bytes10 f; }");
    EXPECT_EQ(s.achievable_slots, 2u);
}

TEST(SuggestPacking, UsesInheritedTail) {
    auto u = parse("contract B { uint128 x; } contract C is B { uint256 w; uint128 y; }");
    const auto& c = *u.find_contract("C");
    auto s = suggest_packing(c, u);
    EXPECT_EQ(s.current_slots, 3u);
    EXPECT_EQ(s.achievable_slots, 2u);
    check_against_oracle(c, u, "tail");
}

TEST(SuggestPacking, CorpusMatchesExhaustiveSearch) {
    std::size_t checked = 0;
    for (const char* dir : {"layout", "lint/vulnerable", "lint/clean"})
        for (const auto& path : test::sol_files(test::data_dir() / dir)) {
            const auto u = test::load_sol(path);
            for (const auto& c : u.contracts) {
                if (c.kind != ContractKind::contract || test::packable_count(c, u) > 8) continue;
                check_against_oracle(c, u, path.filename().string() + ":" + c.name);
                ++checked;
            }
        }
    EXPECT_GE(checked, 20u);
}

TEST(SuggestPacking, RandomContractsMatchExhaustiveSearch) {
    const std::vector<std::string> types{"uint8",  "uint16", "uint32", "uint64", "uint128", "uint256", "bool",
                                         "address", "bytes3", "bytes12", "bytes20", "int40", "string", "S",
                                         "uint8[5]", "mapping(uint => bool)"};
    std::mt19937 rng(17);
    for (int i = 0; i < 300; ++i) {
        std::string src = "contract B { struct S { uint8 x; uint256 y; } ";
        const int base = static_cast<int>(rng() % 3);
        for (int k = 0; k < base; ++k) src += types[rng() % types.size()] + " b" + std::to_string(k) + "; ";
        src += "}\ncontract C is B { ";
        const int n = static_cast<int>(rng() % 10);
        for (int k = 0; k < n; ++k) src += types[rng() % types.size()] + " v" + std::to_string(k) + "; ";
        src += "}";
        auto u = parse(src);
        const auto& c = *u.find_contract("C");
        if (test::packable_count(c, u) > 8) continue;
        check_against_oracle(c, u, src);
    }
}

TEST(SuggestPacking, Deterministic) {
    const std::string src = "contract C { uint8 a; bytes12 b; uint256 c; bool d; uint64 e; string f; uint32 g; }";
    auto a = pack(src);
    auto b = pack(src);
    EXPECT_EQ(a.full_order, b.full_order);
    EXPECT_EQ(a.suggested_order, b.suggested_order);
}

TEST(LayoutJson, Shape) {
    auto u = parse("contract C { uint8 a; uint256 b; uint8 c; }");
    auto j = nlohmann::json::parse(layout_json(*u.find_contract("C"), u));
    EXPECT_EQ(j.at("contract"), "C");
    EXPECT_EQ(j.at("total_slots"), 3);
    EXPECT_EQ(j.at("achievable_slots"), 2);
    ASSERT_EQ(j.at("slots").size(), 3u);
    EXPECT_EQ(j.at("slots")[1].at("name"), "b");
    EXPECT_EQ(j.at("slots")[1].at("slot"), 1);
    EXPECT_EQ(j.at("slots")[1].at("size"), 32);
}

TEST(GasRules, EmptyContractOnlyManualItems) {
    auto ds = gas("pragma solidity 0.5.16; contract C { }");
    EXPECT_EQ(ids(ds, true), (std::vector<std::string>{"GA-EVENTLOG", "GA-SIZE", "GA-USELIB"}));
    for (const auto& d : ds) EXPECT_EQ(d.severity, Severity::manual);
}

TEST(GasRules, ZeroInitializedState) {
    EXPECT_EQ(ids(gas("contract C { uint256 total = 0; }")), std::vector<std::string>{"GA-INIT"});
    EXPECT_TRUE(ids(gas("contract C { uint256 total = 1; }")).empty());
}

TEST(GasRules, LongRevertString) {
    auto ds = gas(
        "contract C { function f(bool ok) external pure { "
        "require(ok, \"this error message is definitely longer than thirty-two bytes\"); } }");
    EXPECT_EQ(ids(ds), std::vector<std::string>{"GA-LONGSTR"});
    EXPECT_TRUE(ids(gas("contract C { function f(bool ok) external pure { require(ok, \"short\"); } }")).empty());
}

TEST(GasRules, PackingFinding) {
    auto ds = gas("contract C { uint8 a; uint256 b; uint8 c; }");
    EXPECT_EQ(ids(ds), std::vector<std::string>{"GA-PACK"});
}

TEST(GasRules, DynamicArrayAndLoopStore) {
    auto ds = gas(
        "contract C { uint[] xs; uint total;\n"
        "  function sum() external { for (uint i = 0; i < 10; i++) { total += i; } } }");
    auto got = ids(ds);
    EXPECT_NE(std::find(got.begin(), got.end(), "GA-ARRAY"), got.end());
    EXPECT_NE(std::find(got.begin(), got.end(), "GA-LOOPSTORE"), got.end());
}

TEST(GasRules, ZeroAssignToStorage) {
    auto ds = gas("contract C { uint x; function f() external { x = 0; } }");
    EXPECT_EQ(ids(ds), std::vector<std::string>{"GA-ZEROASSIGN"});
}

TEST(GasRules, PublicNeverCalledInternally) {
    auto ds = gas("contract C { function f() public {} function g() external { } }");
    EXPECT_EQ(ids(ds), std::vector<std::string>{"GA-PUBEXT"});
    EXPECT_TRUE(ids(gas("contract C { function f() public {} function g() external { f(); } }")).empty());
}

TEST(GasRules, PublicExternalNeverFlagsInternallyCalled) {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        std::set<std::string> called;
        std::string src = "pragma solidity 0.5.16;\ncontract C {\n";
        for (int i = 0; i < n; ++i) {
            src += "  function f" + std::to_string(i) + "() public {";
            for (int k = 0; k < n; ++k)
                if (k != i && rng() % 3 == 0) {
                    src += " f" + std::to_string(k) + "();";
                    called.insert("f" + std::to_string(k));
                }
            src += " }\n";
        }
        src += "}\n";
        for (const auto& d : analyze_gas(parse(src))) {
            if (d.rule_id != "GA-PUBEXT") continue;
            for (const auto& name : called)
                EXPECT_EQ(d.message.find("'" + name + "'"), std::string::npos) << src;
        }
    }
}

TEST(GasRules, Deterministic) {
    for (const auto& path : test::sol_files(test::data_dir() / "layout")) {
        const auto u = test::load_sol(path);
        EXPECT_EQ(analyze_gas(u), analyze_gas(u)) << path;
    }
}
