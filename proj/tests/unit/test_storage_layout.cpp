#include <gtest/gtest.h>

#include <map>
#include <random>

#include "abcde/sol_parser.hpp"
#include "abcde/storage_layout.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace abcde;
using namespace abcde::sol;

namespace {

SourceUnit parse(const std::string& text) {
    auto r = parse_solidity(text, "t.sol");
    if (!r.ok()) throw std::runtime_error(r.errors().front().to_string());
    return r.value();
}

StorageLayout layout_of(const std::string& text, const std::string& contract = "C") {
    auto u = parse(text);
    return storage_layout(*u.find_contract(contract), u);
}

void check_slot_capacity(const StorageLayout& l) {
    std::map<std::uint64_t, std::uint32_t> used;
    for (const auto& e : l.entries) {
        EXPECT_LE(e.offset + e.size, 32u) << e.name;
        used[e.slot] += e.size;
    }
    for (const auto& [slot, bytes] : used) EXPECT_LE(bytes, 32u) << "slot " << slot;
}

}  // namespace

TEST(StorageLayout, NoStateVars) {
    auto l = layout_of("contract C { function f() public {} }");
    EXPECT_TRUE(l.entries.empty());
    EXPECT_EQ(l.total_slots, 0u);
}

TEST(StorageLayout, TwoHalvesThenWord) {
    auto l = layout_of("contract C { uint128 a; uint128 b; uint256 c; }");
    ASSERT_EQ(l.entries.size(), 3u);
    EXPECT_EQ(std::make_pair(l.entries[0].slot, l.entries[0].offset), std::make_pair(std::uint64_t{0}, 0u));
    EXPECT_EQ(std::make_pair(l.entries[1].slot, l.entries[1].offset), std::make_pair(std::uint64_t{0}, 16u));
    EXPECT_EQ(std::make_pair(l.entries[2].slot, l.entries[2].offset), std::make_pair(std::uint64_t{1}, 0u));
    EXPECT_EQ(l.total_slots, 2u);
}

TEST(StorageLayout, WordBetweenSmallInts) {
    auto l = layout_of("contract C { uint8 a; uint256 b; uint8 c; }");
    ASSERT_EQ(l.entries.size(), 3u);
    EXPECT_EQ(l.entries[0].slot, 0u);
    EXPECT_EQ(l.entries[1].slot, 1u);
    EXPECT_EQ(l.entries[2].slot, 2u);
    EXPECT_EQ(l.total_slots, 3u);
}

TEST(StorageLayout, ConstantsTakeNoSlot) {
    auto l = layout_of("contract C { uint constant K = 1; bool a; }");
    ASSERT_EQ(l.entries.size(), 1u);
    EXPECT_EQ(l.total_slots, 1u);
}

TEST(StorageLayout, UnknownType) {
    EXPECT_THROW(layout_of("contract C { Missing m; }"), UnknownTypeError);
}

TEST(StorageLayout, OwnOrderMustBePermutation) {
    auto u = parse("contract C { uint8 a; uint256 b; uint8 c; }");
    const auto& c = *u.find_contract("C");
    EXPECT_EQ(storage_layout(c, u, {"a", "c", "b"}).total_slots, 2u);
    EXPECT_THROW(storage_layout(c, u, {"a", "b"}), std::invalid_argument);
    EXPECT_THROW(storage_layout(c, u, {"a", "b", "x"}), std::invalid_argument);
}

TEST(StorageLayout, MatchesCompilerOutput) {
    const auto dir = test::data_dir() / "layout";
    const auto oracle = nlohmann::json::parse(test::read_text(dir / "oracle.json"));
    std::size_t contracts = 0;
    std::size_t vars = 0;
    for (const auto& [file, by_contract] : oracle.items()) {
        if (file == "compiler") continue;
        const auto unit = test::load_sol(dir / file);
        for (const auto& [name, expected] : by_contract.items()) {
            const auto* c = unit.find_contract(name);
            ASSERT_NE(c, nullptr) << file << ":" << name;
            const auto got = storage_layout(*c, unit);
            ASSERT_EQ(got.entries.size(), expected.size()) << file << ":" << name;
            for (std::size_t i = 0; i < expected.size(); ++i) {
                const auto& want = expected[i];
                const auto& e = got.entries[i];
                EXPECT_EQ(e.name, want.at("name").get<std::string>()) << file << ":" << name;
                EXPECT_EQ(e.slot, want.at("slot").get<std::uint64_t>()) << file << ":" << name << "." << e.name;
                EXPECT_EQ(e.offset, want.at("offset").get<std::uint32_t>()) << file << ":" << name << "." << e.name;
                ++vars;
            }
            check_slot_capacity(got);
            ++contracts;
        }
    }
    EXPECT_GE(contracts, 10u);
    EXPECT_GE(vars, 100u);
}

TEST(StorageLayout, RandomContractsRespectSlotCapacity) {
    const std::vector<std::string> types{"uint8",  "uint16",  "uint32", "uint64",  "uint128", "uint256", "bool",
                                         "address", "bytes4", "bytes16", "int24",  "bytes32", "string",  "E",
                                         "S",       "uint8[3]", "uint128[2]", "mapping(address => uint)"};
    std::mt19937 rng(11);
    for (int i = 0; i < 300; ++i) {
        std::string src = "contract C { enum E { A, B } struct S { uint8 x; uint256 y; }\n";
        const int n = 1 + static_cast<int>(rng() % 12);
        for (int k = 0; k < n; ++k) src += types[rng() % types.size()] + " v" + std::to_string(k) + ";\n";
        src += "}";
        auto l = layout_of(src);
        EXPECT_EQ(l.entries.size(), static_cast<std::size_t>(n));
        check_slot_capacity(l);
        for (std::size_t k = 1; k < l.entries.size(); ++k) {
            const auto& a = l.entries[k - 1];
            const auto& b = l.entries[k];
            EXPECT_LT(std::make_pair(a.slot, a.offset), std::make_pair(b.slot, b.offset));
        }
    }
}
