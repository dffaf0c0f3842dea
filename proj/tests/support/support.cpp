#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cli.hpp"
#include "json.hpp"

#include "abcde/dsl.hpp"
#include "abcde/sol_parser.hpp"
#include "abcde/storage_layout.hpp"

namespace abcde::test {

using namespace abcde::model;

std::filesystem::path data_dir() { return ABCDE_TEST_DATA; }

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

template <class T>
T take(ParseResult<T> r, const std::string& what) {
    if (!r.ok()) {
        std::string msg = what + ":";
        for (const auto& e : r.errors()) msg += "\n  " + e.to_string();
        throw std::runtime_error(msg);
    }
    return std::move(r).value();
}

}  // namespace

SystemModel load_model(const std::string& relative) {
    auto path = data_dir() / relative;
    return take(dsl::parse_model(read_text(path), path.string()), path.string());
}

sol::SourceUnit load_sol(const std::filesystem::path& path) {
    return take(sol::parse_solidity(read_text(path), path.string()), path.string());
}

std::vector<std::filesystem::path> sol_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".sol") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Random models

namespace {

struct Gen {
    std::mt19937& rng;
    int serial = 0;

    int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
    bool coin(int percent = 50) { return below(100) < percent; }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v.at(static_cast<std::size_t>(below(static_cast<int>(v.size())))); }

    std::string name(const std::string& prefix) { return prefix + std::to_string(++serial); }

    std::string text() {
        static const std::string chars =
            "abcdefghijklmnopqrstuvwxyz ABCXYZ0123456789.,;:()[]{}<>=+-*/!?&|'\"\\\n\t_#@$%^~`";
        std::string s;
        const int n = below(24);
        for (int i = 0; i < n; ++i) s += chars[static_cast<std::size_t>(below(static_cast<int>(chars.size())))];
        return s;
    }

    TypeName type(const std::vector<std::string>& user_types, int depth = 0) {
        static const std::vector<std::string> elementary{"uint256", "uint8", "int128", "address", "bool",
                                                         "bytes32", "bytes",  "string", "bytes4"};
        TypeName t;
        const int roll = below(10);
        if (roll < 2 && depth < 2) {
            t = TypeName::mapping(TypeName::elementary(pick(elementary)), type(user_types, depth + 1));
        } else if (roll < 4 && !user_types.empty()) {
            t = TypeName::user(pick(user_types));
        } else {
            t = TypeName::elementary(pick(elementary));
        }
        if (coin(15)) t = TypeName::array_of(std::move(t));
        return t;
    }

    std::vector<Param> params(const std::vector<std::string>& user_types, int max) {
        std::vector<Param> ps;
        const int n = below(max + 1);
        for (int i = 0; i < n; ++i) ps.push_back({name("p"), type(user_types)});
        return ps;
    }

    FunctionSig function(const std::vector<std::string>& user_types, const std::vector<std::string>& modifiers) {
        FunctionSig f;
        f.name = name("fn");
        f.params = params(user_types, 3);
        f.visibility = static_cast<Visibility>(below(4));
        f.mutability = static_cast<Mutability>(below(4));
        for (const auto& m : modifiers)
            if (coin(30)) f.applied_modifiers.push_back(m);
        const int r = below(3);
        for (int i = 0; i < r; ++i) f.returns.push_back(type(user_types));
        return f;
    }
};

}  // namespace

SystemModel random_model(std::mt19937& rng) {
    Gen g{rng};
    SystemModel m;
    m.name = g.name("Sys");
    if (g.coin(70)) m.goal = g.text();
    const int actors = g.below(5);
    for (int i = 0; i < actors; ++i) m.actors.push_back({g.name("Actor"), static_cast<ActorKind>(g.below(7)), {}});

    std::vector<std::string> user_types;
    std::vector<std::string> contracts;
    const int decls = g.below(7);
    for (int i = 0; i < decls; ++i) {
        const int roll = g.below(6);
        if (roll == 0) {
            StructDecl s;
            s.name = g.name("St");
            const int n = 1 + g.below(4);
            for (int k = 0; k < n; ++k) s.fields.push_back({g.name("fld"), g.type(user_types)});
            user_types.push_back(s.name);
            m.add(std::move(s));
        } else if (roll == 1) {
            EnumDecl e;
            e.name = g.name("En");
            const int n = 1 + g.below(4);
            for (int k = 0; k < n; ++k) e.values.push_back(g.name("Val"));
            user_types.push_back(e.name);
            m.add(std::move(e));
        } else {
            ContractDecl c;
            c.name = g.name("Ct");
            c.kind = roll == 2 ? ContractKind::interface : roll == 3 ? ContractKind::library_contract
                                                                     : ContractKind::contract;
            if (c.kind == ContractKind::contract) {
                for (const auto& p : contracts)
                    if (g.coin(25)) c.parents.push_back(p);
                for (int p = 0; p < 15; ++p)
                    if (g.coin(10)) c.pattern_tags.insert(static_cast<PatternId>(p));
                const int vars = g.below(4);
                for (int k = 0; k < vars; ++k)
                    c.state_vars.push_back({g.name("var"), g.type(user_types), static_cast<Visibility>(g.below(4)), {}});
                const int events = g.below(3);
                for (int k = 0; k < events; ++k) c.events.push_back({g.name("Ev"), g.params(user_types, 3), {}});
                const int mods = g.below(3);
                for (int k = 0; k < mods; ++k)
                    c.modifiers.push_back({g.name("mod"), g.params(user_types, 2), g.coin() ? g.text() : "", {}});
            }
            std::vector<std::string> mod_names;
            for (const auto& md : c.modifiers) mod_names.push_back(md.name);
            const int fns = g.below(4);
            for (int k = 0; k < fns; ++k) c.functions.push_back(g.function(user_types, mod_names));
            contracts.push_back(c.name);
            user_types.push_back(c.name);
            m.add(std::move(c));
        }
    }

    const int scenarios = g.below(3);
    for (int i = 0; i < scenarios; ++i) {
        Scenario sc;
        sc.name = g.name("Scn");
        const int parts = 1 + g.below(4);
        for (int k = 0; k < parts; ++k) {
            Participant p;
            p.alias = g.name("P");
            if (!contracts.empty() && g.coin(40)) {
                p.kind = ActorKind::contract;
                p.contract = g.pick(contracts);
            } else {
                p.kind = static_cast<ActorKind>(g.below(7));
            }
            sc.participants.push_back(std::move(p));
        }
        const int msgs = g.below(6);
        for (int k = 0; k < msgs; ++k) {
            Message msg;
            msg.from = g.pick(sc.participants).alias;
            msg.to = g.pick(sc.participants).alias;
            msg.label = g.text();
            msg.kind = static_cast<MessageKind>(g.below(7));
            msg.dashed = msg.kind == MessageKind::ether_transfer && g.coin();
            sc.messages.push_back(std::move(msg));
        }
        m.scenarios.push_back(std::move(sc));
    }
    return m;
}

Scenario random_scenario(std::mt19937& rng, std::size_t max_messages) {
    Gen g{rng};
    Scenario sc;
    sc.name = "Random";
    sc.participants = {
        {"Alice", ActorKind::person, std::nullopt, {}},
        {"Bank", ActorKind::contract, std::nullopt, {}},
        {"Token", ActorKind::contract, std::nullopt, {}},
        {"Vault", ActorKind::contract, std::nullopt, {}},
        {"Evil", ActorKind::external_contract, std::nullopt, {}},
        {"Feed", ActorKind::oracle, std::nullopt, {}},
        {"Wallet", ActorKind::account, std::nullopt, {}},
        {"Server", ActorKind::system, std::nullopt, {}},
    };
    const int n = 1 + g.below(static_cast<int>(max_messages));
    for (int i = 0; i < n; ++i) {
        Message msg;
        // Bias toward code-executing senders so call chains get deep.
        msg.from = g.coin(80) ? sc.participants[static_cast<std::size_t>(1 + g.below(5))].alias
                              : g.pick(sc.participants).alias;
        msg.to = g.pick(sc.participants).alias;
        msg.label = "m" + std::to_string(i);
        msg.kind = static_cast<MessageKind>(g.below(7));
        sc.messages.push_back(std::move(msg));
    }
    return sc;
}

// ---------------------------------------------------------------------------
// Oracles

std::vector<bool> reentrancy_oracle(const Scenario& scenario) {
    auto runs_code = [&](const std::string& alias) {
        for (const auto& p : scenario.participants)
            if (p.alias == alias)
                return p.kind == ActorKind::contract || p.kind == ActorKind::external_contract ||
                       p.kind == ActorKind::oracle;
        return false;
    };
    auto opens_activation = [](MessageKind k) { return k != MessageKind::ether_transfer; };

    std::vector<std::string> stack;  // call chain, outermost first
    std::vector<bool> out;
    for (const auto& msg : scenario.messages) {
        bool active = false;
        if (runs_code(msg.from)) {
            // The sender resumes at its innermost activation; everything above has returned.
            auto it = std::find(stack.rbegin(), stack.rend(), msg.from);
            if (it == stack.rend()) {
                stack.clear();
            } else {
                stack.erase(it.base(), stack.end());
                active = true;
            }
        } else {
            stack.clear();
        }
        bool reenters = false;
        if (opens_activation(msg.kind)) {
            reenters = active && msg.to != msg.from && std::find(stack.begin(), stack.end(), msg.to) != stack.end();
            stack.push_back(msg.to);
        }
        out.push_back(reenters);
    }
    return out;
}

namespace {

using Seq = std::vector<std::string>;

bool c3_rec(const std::string& name, const std::map<std::string, Seq>& parents, std::map<std::string, Seq>& memo,
            std::set<std::string>& visiting, Seq& out) {
    if (auto it = memo.find(name); it != memo.end()) {
        out = it->second;
        return true;
    }
    auto p = parents.find(name);
    if (p == parents.end() || visiting.count(name)) return false;
    visiting.insert(name);
    // Python order: most-derived parent first, i.e. the Solidity list reversed.
    Seq direct(p->second.rbegin(), p->second.rend());
    std::vector<Seq> lists;
    for (const auto& b : direct) {
        Seq l;
        if (!c3_rec(b, parents, memo, visiting, l)) return false;
        lists.push_back(l);
    }
    lists.push_back(direct);
    visiting.erase(name);

    Seq result{name};
    for (;;) {
        lists.erase(std::remove_if(lists.begin(), lists.end(), [](const Seq& s) { return s.empty(); }), lists.end());
        if (lists.empty()) break;
        std::string head;
        for (const auto& l : lists) {
            const std::string& cand = l.front();
            bool blocked = false;
            for (const auto& other : lists)
                if (std::find(other.begin() + 1, other.end(), cand) != other.end()) blocked = true;
            if (!blocked) {
                head = cand;
                break;
            }
        }
        if (head.empty()) return false;
        result.push_back(head);
        for (auto& l : lists)
            if (l.front() == head) l.erase(l.begin());
    }
    memo[name] = result;
    out = std::move(result);
    return true;
}

}  // namespace

std::vector<std::string> c3_oracle(const std::string& name, const std::map<std::string, Seq>& parents) {
    std::map<std::string, Seq> memo;
    std::set<std::string> visiting;
    Seq out;
    if (!c3_rec(name, parents, memo, visiting, out)) return {};
    return out;
}

namespace {

struct OwnItems {
    std::vector<std::uint32_t> packable;  // byte sizes
    std::uint64_t whole_slots = 0;        // slots of variables that never share
    std::size_t whole_count = 0;
};

OwnItems own_items(const sol::ContractDef& contract, const sol::SourceUnit& unit) {
    OwnItems items;
    for (const auto& v : contract.state_vars) {
        if (v.is_constant || v.is_immutable) continue;
        auto sz = sol::storage_size(v.type_name, contract, unit);
        if (sz.packable) {
            items.packable.push_back(sz.bytes);
        } else {
            items.whole_slots += sz.slots;
            ++items.whole_count;
        }
    }
    return items;
}

}  // namespace

std::size_t packable_count(const sol::ContractDef& contract, const sol::SourceUnit& unit) {
    return own_items(contract, unit).packable.size();
}

std::uint64_t packing_oracle(const sol::ContractDef& contract, const sol::SourceUnit& unit) {
    // Where the inherited variables leave off. Inherited positions come from
    // the layout engine, which the compiler-output test checks separately.
    std::uint64_t next_slot = 0;
    std::uint32_t used = 0;
    bool open = false;
    const auto layout = sol::storage_layout(contract, unit);
    const sol::LayoutEntry* last = nullptr;
    for (const auto& e : layout.entries)
        if (e.contract != contract.name) last = &e;
    if (last) {
        const auto* owner = unit.find_contract(last->contract);
        const sol::VarDecl* decl = nullptr;
        for (const auto& v : owner->state_vars)
            if (v.name == last->name) decl = &v;
        const auto sz = sol::storage_size(decl->type_name, *owner, unit);
        if (sz.packable) {
            next_slot = last->slot + 1;
            used = last->offset + last->size;
            open = true;
        } else {
            next_slot = last->slot + sz.slots;
        }
    }

    OwnItems items = own_items(contract, unit);
    std::sort(items.packable.begin(), items.packable.end());
    const std::size_t n = items.packable.size();
    // Variables that take whole slots only matter as slot breaks, and a run
    // of them breaks once, so try every subset of the n + 1 gaps.
    const std::size_t gaps = n + 1;
    std::uint64_t best = UINT64_MAX;
    do {
        for (std::uint32_t mask = 0; mask < (1u << gaps); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) > items.whole_count) continue;
            if (items.whole_count > 0 && mask == 0) continue;
            std::uint64_t slot = next_slot;
            std::uint32_t fill = used;
            bool is_open = open;
            for (std::size_t i = 0; i <= n; ++i) {
                if (mask & (1u << i)) is_open = false;
                if (i == n) break;
                const std::uint32_t s = items.packable[i];
                if (is_open && fill + s <= 32) {
                    fill += s;
                } else {
                    ++slot;
                    fill = s;
                    is_open = true;
                }
            }
            best = std::min(best, slot + items.whole_slots);
        }
    } while (std::next_permutation(items.packable.begin(), items.packable.end()));
    return best;
}

// ---------------------------------------------------------------------------
// Lint corpus

std::vector<SeededFinding> lint_manifest() {
    const auto dir = data_dir() / "lint";
    const auto manifest = nlohmann::json::parse(read_text(dir / "manifest.json"));
    std::vector<SeededFinding> out;
    for (const auto& entry : manifest) {
        SeededFinding f;
        f.file = (dir / "vulnerable" / entry.at("file").get<std::string>()).string();
        f.rule = entry.at("rule").get<std::string>();
        const std::string anchor = entry.at("anchor").get<std::string>();
        const std::string text = read_text(f.file);
        const auto pos = text.find(anchor);
        if (pos == std::string::npos) throw std::runtime_error("anchor not found in " + f.file + ": " + anchor);
        if (text.find(anchor, pos + 1) != std::string::npos)
            throw std::runtime_error("anchor is ambiguous in " + f.file + ": " + anchor);
        const auto line_start = text.rfind('\n', pos);
        f.line = 1 + static_cast<std::uint32_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
        f.column = static_cast<std::uint32_t>(line_start == std::string::npos ? pos + 1 : pos - line_start);
        out.push_back(std::move(f));
    }
    return out;
}

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    CliResult r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

}  // namespace abcde::test
