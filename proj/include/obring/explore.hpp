#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "obring/scheduler.hpp"

namespace obring {

using MachineFactory = std::function<std::vector<ProtocolMachine>(const RingConfig&)>;

/// What an interleaving ends in: verdicts (nullopt = unfinished), terminal
/// class and the per-process counters.
struct Signature {
    std::vector<std::optional<Verdict>> verdicts;
    TerminalClass terminal = TerminalClass::Deadlock;
    std::vector<ProcessCounters> counters;

    auto operator<=>(const Signature&) const = default;

    /// Adapts a signature to the judge_* functions.
    RunResult as_result() const;
};

struct ExploreOptions {
    std::uint64_t step_cap = 1'000'000;     // depth of any single interleaving
    std::uint64_t state_cap = 20'000'000;   // distinct global states visited
};

struct ExploreResult {
    /// Each distinct terminal signature with the first delivery sequence reaching it.
    std::map<Signature, std::vector<DeliveryEvent>> signatures;
    std::uint64_t states_visited = 0;
    std::uint64_t max_depth = 0;
};

/// Depth-first enumeration of every delivery choice (including which port an
/// any-port receive takes). Global states reached twice are explored once.
/// Throws StateCapExceeded or StepCapExceeded instead of truncating.
ExploreResult explore_all(const RingConfig& config, const MachineFactory& factory,
                          const ExploreOptions& options = {});

}  // namespace obring
