#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "abcde/dsl.hpp"
#include "abcde/model.hpp"
#include "support.hpp"

using namespace abcde;
using namespace abcde::model;

namespace {

SystemModel parse(const std::string& text) {
    auto r = dsl::parse_model(text, "m.abcde");
    if (!r.ok()) throw std::runtime_error(r.errors().front().to_string());
    return r.value();
}

std::vector<std::string> rule_ids(const std::vector<Diagnostic>& ds) {
    std::vector<std::string> out;
    for (const auto& d : ds) out.push_back(d.rule_id);
    return out;
}

bool has_rule(const std::vector<Diagnostic>& ds, const std::string& id) {
    return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.rule_id == id; });
}

ContractDecl contract(std::string name, std::vector<std::string> parents = {}, std::vector<std::string> fns = {}) {
    ContractDecl c;
    c.name = std::move(name);
    c.parents = std::move(parents);
    for (auto& f : fns) {
        FunctionSig s;
        s.name = f;
        c.functions.push_back(s);
    }
    return c;
}

SystemModel hierarchy(const std::map<std::string, std::vector<std::string>>& parents) {
    SystemModel m;
    m.name = "H";
    for (const auto& [name, ps] : parents) m.add(contract(name, ps));
    return m;
}

}  // namespace

TEST(Validate, EmptyModelIsValid) {
    SystemModel m;
    m.name = "S";
    EXPECT_TRUE(validate_model(m).empty());
}

TEST(Validate, DexFixtureIsValid) {
    auto ds = validate_model(test::load_model("dex.abcde"));
    EXPECT_TRUE(ds.empty()) << (ds.empty() ? "" : format_diagnostic(ds.front()));
    EXPECT_TRUE(validate_model(test::load_model("dao.abcde")).empty());
}

TEST(Validate, TransMsgFromContract) {
    auto m = parse(
        "system S { contract C { functions { f() public } }\n"
        " scenario X { participant A : contract C\n participant B : contract C\n"
        " A -> B : \"f()\" [trans-msg] } }");
    EXPECT_TRUE(has_rule(validate_model(m), "MOD-TRANSMSG-SOURCE"));
}

TEST(Validate, InterfaceWithState) {
    auto m = parse("system S { interface I { state { x: uint256 } functions { f() external } } }");
    EXPECT_EQ(rule_ids(validate_model(m)), std::vector<std::string>{"MOD-IFACE-STATE"});
}

TEST(Validate, DirectMsgFromPerson) {
    auto m = parse(
        "system S { actor U : person\n contract C { functions { f() public } }\n"
        " scenario X { participant U : person\n participant D : contract C\n U -> D : \"f()\" [direct-msg] } }");
    EXPECT_TRUE(has_rule(validate_model(m), "MOD-DIRECTMSG"));
}

TEST(Validate, UnknownTypeAndParent) {
    auto m = parse("system S { contract C is Nope { state { x: Missing } } }");
    auto ds = validate_model(m);
    EXPECT_TRUE(has_rule(ds, "MOD-UNKNOWN-TYPE"));
    EXPECT_TRUE(has_rule(ds, "MOD-UNKNOWN-PARENT"));
}

TEST(Validate, InheritanceCycle) {
    auto m = parse("system S { contract A is B { } contract B is A { } }");
    EXPECT_TRUE(has_rule(validate_model(m), "MOD-INHERIT-CYCLE"));
}

TEST(Validate, SenderWithoutActivation) {
    auto m = parse(
        "system S { actor U : person\n contract C { functions { f() public } }\n"
        " scenario X { participant U : person\n participant A : contract C\n participant B : contract C\n"
        " U -> A : \"f()\" [trans-msg]\n B -> A : \"f()\" [direct-msg] } }");
    EXPECT_TRUE(has_rule(validate_model(m), "MOD-ACTIVATION"));
}

TEST(Validate, IdempotentAndPure) {
    std::mt19937 rng(7);
    for (int i = 0; i < 100; ++i) {
        const auto m = test::random_model(rng);
        const auto copy = m;
        const auto a = validate_model(m);
        const auto b = validate_model(m);
        EXPECT_EQ(a, b);
        EXPECT_EQ(m, copy);
    }
}

TEST(Linearize, NoParents) {
    auto m = hierarchy({{"A", {}}});
    EXPECT_EQ(linearize(m, "A"), std::vector<std::string>{"A"});
}

TEST(Linearize, Diamond) {
    auto m = hierarchy({{"A", {}}, {"B", {"A"}}, {"C", {"A"}}, {"D", {"B", "C"}}});
    EXPECT_EQ(linearize(m, "D"), (std::vector<std::string>{"D", "C", "B", "A"}));
}

TEST(Linearize, Cycle) {
    auto m = hierarchy({{"A", {"B"}}, {"B", {"A"}}});
    EXPECT_THROW(linearize(m, "A"), CycleError);
}

TEST(Linearize, UnknownContract) {
    auto m = hierarchy({{"A", {"Z"}}});
    EXPECT_THROW(linearize(m, "A"), UnknownContractError);
    EXPECT_THROW(linearize(m, "Q"), UnknownContractError);
}

TEST(Linearize, InconsistentOrder) {
    // A already derives from X, so listing X as more derived than A has no solution.
    auto m = hierarchy({{"X", {}}, {"A", {"X"}}, {"C", {"A", "X"}}});
    EXPECT_THROW(linearize(m, "C"), LinearizationError);
}

TEST(Linearize, TextbookExample) {
    // Classic C3 example; parent lists are written base-most first.
    auto m = hierarchy({{"O", {}},
                        {"A", {"O"}},
                        {"B", {"O"}},
                        {"C", {"O"}},
                        {"D", {"O"}},
                        {"E", {"O"}},
                        {"K1", {"C", "B", "A"}},
                        {"K2", {"E", "B", "D"}},
                        {"K3", {"A", "D"}},
                        {"Z", {"K3", "K2", "K1"}}});
    EXPECT_EQ(linearize(m, "Z"),
              (std::vector<std::string>{"Z", "K1", "K2", "K3", "D", "A", "B", "C", "E", "O"}));
}

TEST(Linearize, AgreesWithOracleOnRandomHierarchies) {
    std::mt19937 rng(99);
    int solvable = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::map<std::string, std::vector<std::string>> parents;
        const int n = 2 + static_cast<int>(rng() % 7);
        for (int i = 0; i < n; ++i) {
            std::vector<std::string> ps;
            for (int j = 0; j < i; ++j)
                if (rng() % 3 == 0) ps.push_back("N" + std::to_string(j));
            std::shuffle(ps.begin(), ps.end(), rng);
            parents["N" + std::to_string(i)] = ps;
        }
        auto m = hierarchy(parents);
        for (const auto& [name, ps] : parents) {
            const auto expected = test::c3_oracle(name, parents);
            if (expected.empty()) {
                EXPECT_THROW(linearize(m, name), LinearizationError) << name;
                continue;
            }
            ++solvable;
            const auto got = linearize(m, name);
            EXPECT_EQ(got, expected) << name;
            // Starts with the contract and lists each ancestor once.
            EXPECT_EQ(got.front(), name);
            EXPECT_EQ(std::set<std::string>(got.begin(), got.end()).size(), got.size());
        }
    }
    EXPECT_GT(solvable, 300);
}

TEST(Linearize, SingleInheritanceIsAncestorPath) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        // Random forest where each node has at most one parent.
        std::map<std::string, std::vector<std::string>> parents;
        const int n = 1 + static_cast<int>(rng() % 10);
        for (int i = 0; i < n; ++i) {
            std::vector<std::string> ps;
            if (i > 0 && rng() % 4 != 0) ps.push_back("N" + std::to_string(rng() % i));
            parents["N" + std::to_string(i)] = ps;
        }
        auto m = hierarchy(parents);
        for (const auto& [name, ps] : parents) {
            std::vector<std::string> path{name};
            for (auto cur = name; !parents[cur].empty();) {
                cur = parents[cur].front();
                path.push_back(cur);
            }
            EXPECT_EQ(linearize(m, name), path);
        }
    }
}

TEST(EffectiveInterface, NoParents) {
    SystemModel m;
    m.add(contract("A", {}, {"f", "g"}));
    auto ei = effective_interface(m, "A");
    ASSERT_EQ(ei.functions.size(), 2u);
    EXPECT_EQ(ei.functions[0].sig.name, "f");
    EXPECT_EQ(ei.functions[1].sig.name, "g");
    EXPECT_EQ(ei.functions[0].defined_in, "A");
    EXPECT_TRUE(ei.collisions.empty());
}

TEST(EffectiveInterface, ChildOverrideWins) {
    SystemModel m;
    m.add(contract("A", {}, {"f"}));
    m.add(contract("B", {"A"}, {"f"}));
    auto ei = effective_interface(m, "B");
    ASSERT_EQ(ei.functions.size(), 1u);
    EXPECT_EQ(ei.functions[0].defined_in, "B");
    EXPECT_TRUE(ei.collisions.empty());
}

TEST(EffectiveInterface, DiamondCollision) {
    SystemModel m;
    m.add(contract("A", {}, {}));
    m.add(contract("B", {"A"}, {"f"}));
    m.add(contract("C", {"A"}, {"f"}));
    m.add(contract("D", {"B", "C"}, {}));
    auto ei = effective_interface(m, "D");
    ASSERT_EQ(ei.functions.size(), 1u);
    EXPECT_EQ(ei.functions[0].defined_in, "C");
    ASSERT_EQ(ei.collisions.size(), 1u);
    EXPECT_EQ(ei.collisions[0], (FunctionCollision{"f", "C", "B"}));
}

TEST(TraceActivations, CallBackIsReentry) {
    Scenario sc;
    sc.participants = {{"U", ActorKind::person, std::nullopt, {}},
                       {"D", ActorKind::contract, std::nullopt, {}},
                       {"X", ActorKind::external_contract, std::nullopt, {}}};
    sc.messages = {{"U", "D", "withdraw", MessageKind::trans_msg, false, {}},
                   {"D", "X", "call", MessageKind::direct_msg, false, {}},
                   {"X", "D", "withdraw", MessageKind::direct_msg, false, {}}};
    auto t = trace_activations(sc);
    ASSERT_EQ(t.size(), 3u);
    EXPECT_FALSE(t[0].reenters);
    EXPECT_FALSE(t[1].reenters);
    EXPECT_TRUE(t[2].reenters);
    for (const auto& s : t) EXPECT_TRUE(s.sender_active);
}

TEST(TraceActivations, SelfCallAndReturnAreNotReentry) {
    Scenario sc;
    sc.participants = {{"U", ActorKind::person, std::nullopt, {}},
                       {"D", ActorKind::contract, std::nullopt, {}},
                       {"T", ActorKind::contract, std::nullopt, {}}};
    sc.messages = {{"U", "D", "f", MessageKind::trans_msg, false, {}},
                   {"D", "D", "g", MessageKind::view_call, false, {}},
                   {"D", "T", "h", MessageKind::direct_msg, false, {}},
                   {"D", "T", "h2", MessageKind::direct_msg, false, {}}};
    for (const auto& s : trace_activations(sc)) {
        EXPECT_FALSE(s.reenters);
        EXPECT_TRUE(s.sender_active);
    }
}

TEST(TraceActivations, AgreesWithStackOracle) {
    std::mt19937 rng(3);
    for (int i = 0; i < 500; ++i) {
        const auto sc = test::random_scenario(rng, 20);
        const auto trace = trace_activations(sc);
        const auto oracle = test::reentrancy_oracle(sc);
        ASSERT_EQ(trace.size(), oracle.size());
        for (std::size_t k = 0; k < trace.size(); ++k) EXPECT_EQ(trace[k].reenters, oracle[k]) << i << ":" << k;
    }
}
