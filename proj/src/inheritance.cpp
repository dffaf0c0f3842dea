#include "abcde/inheritance.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace abcde {

namespace {

std::string join_cycle(const std::vector<std::string>& cycle) {
    std::string out;
    for (const auto& n : cycle) {
        if (!out.empty()) out += " -> ";
        out += n;
    }
    return out;
}

class Linearizer {
public:
    explicit Linearizer(const ParentLookup& parents_of) : parents_of_(parents_of) {}

    const std::vector<std::string>& run(const std::string& name) {
        if (auto it = done_.find(name); it != done_.end()) return it->second;
        if (auto pos = std::find(stack_.begin(), stack_.end(), name); pos != stack_.end()) {
            std::vector<std::string> cycle(pos, stack_.end());
            cycle.push_back(name);
            throw CycleError(std::move(cycle));
        }
        auto parents = parents_of_(name);
        if (!parents) throw UnknownContractError("unknown contract '" + name + "'");

        stack_.push_back(name);
        std::vector<std::vector<std::string>> sequences;
        for (auto it = parents->rbegin(); it != parents->rend(); ++it) sequences.push_back(run(*it));
        sequences.emplace_back(parents->rbegin(), parents->rend());
        stack_.pop_back();

        std::vector<std::string> result{name};
        merge(name, sequences, result);
        return done_.emplace(name, std::move(result)).first->second;
    }

private:
    static void merge(const std::string& name, std::vector<std::vector<std::string>>& seqs,
                      std::vector<std::string>& out) {
        std::vector<std::size_t> heads(seqs.size(), 0);
        auto in_tail = [&](const std::string& candidate) {
            for (std::size_t i = 0; i < seqs.size(); ++i) {
                auto begin = seqs[i].begin() + static_cast<std::ptrdiff_t>(heads[i]) + 1;
                if (heads[i] < seqs[i].size() && std::find(begin, seqs[i].end(), candidate) != seqs[i].end())
                    return true;
            }
            return false;
        };
        for (;;) {
            std::optional<std::string> pick;
            bool remaining = false;
            for (std::size_t i = 0; i < seqs.size() && !pick; ++i) {
                if (heads[i] >= seqs[i].size()) continue;
                remaining = true;
                if (!in_tail(seqs[i][heads[i]])) pick = seqs[i][heads[i]];
            }
            if (!remaining) return;
            if (!pick) throw LinearizationError("inconsistent inheritance order for '" + name + "'");
            out.push_back(*pick);
            for (std::size_t i = 0; i < seqs.size(); ++i)
                if (heads[i] < seqs[i].size() && seqs[i][heads[i]] == *pick) ++heads[i];
        }
    }

    const ParentLookup& parents_of_;
    std::map<std::string, std::vector<std::string>> done_;
    std::vector<std::string> stack_;
};

}  // namespace

CycleError::CycleError(std::vector<std::string> cycle)
    : std::runtime_error("inheritance cycle: " + join_cycle(cycle)), cycle_(std::move(cycle)) {}

std::vector<std::string> c3_linearize(const std::string& name, const ParentLookup& parents_of) {
    Linearizer lin(parents_of);
    return lin.run(name);
}

}  // namespace abcde
