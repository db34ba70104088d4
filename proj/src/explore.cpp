#include "obring/explore.hpp"

#include <unordered_set>

#include "obring/error.hpp"

namespace obring {

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& k) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto v : k) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 0x100000001b3ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

class Explorer {
public:
    Explorer(const ExploreOptions& options) : options_(options) {}

    void visit(const SimState& state) {
        if (!seen_.insert(state.key()).second) return;
        if (seen_.size() > options_.state_cap)
            throw Error(ErrorCode::StateCapExceeded,
                        "more than " + std::to_string(options_.state_cap) + " states");
        result_.states_visited = seen_.size();
        result_.max_depth = std::max<std::uint64_t>(result_.max_depth, path_.size());

        const auto enabled = enabled_events(state);
        if (enabled.empty()) {
            Signature sig;
            sig.terminal = classify(state, false);
            sig.counters = state.counters();
            for (const auto& m : state.machines()) sig.verdicts.push_back(verdict_of(m.blocked_on()));
            result_.signatures.try_emplace(std::move(sig), path_);
            return;
        }
        if (path_.size() >= options_.step_cap)
            throw Error(ErrorCode::StepCapExceeded,
                        "interleaving longer than " + std::to_string(options_.step_cap));
        for (const auto& ev : enabled) {
            SimState next = state;
            next.fire(ev);
            path_.push_back(ev);
            visit(next);
            path_.pop_back();
        }
    }

    ExploreResult take() { return std::move(result_); }

private:
    ExploreOptions options_;
    std::unordered_set<std::vector<std::int64_t>, KeyHash> seen_;
    std::vector<DeliveryEvent> path_;
    ExploreResult result_;
};

}  // namespace

RunResult Signature::as_result() const {
    RunResult r;
    r.verdicts = verdicts;
    r.terminal = terminal;
    r.counters = counters;
    return r;
}

ExploreResult explore_all(const RingConfig& config, const MachineFactory& factory,
                          const ExploreOptions& options) {
    SimState root(config, factory(config));
    root.start();
    Explorer explorer(options);
    explorer.visit(root);
    return explorer.take();
}

}  // namespace obring
