#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "obring/id_codec.hpp"
#include "obring/scheduler.hpp"

namespace obring {

struct Violation {
    std::string name;    // e.g. "leader_ok"
    std::string detail;
    std::optional<std::uint64_t> step;

    bool operator==(const Violation&) const = default;
};

struct Judgement {
    bool leader_ok = true;
    bool quiescent_ok = true;
    bool cw_count_ok = true;
    bool ccw_count_ok = true;
    std::vector<Violation> violated;

    bool passed() const noexcept { return violated.empty(); }
};

/// Expected per-process clockwise sends of the logarithmic election: (2 len - 1) d.
std::uint64_t log_election_cw_per_process(const EncodedId& min_id, std::uint64_t d);
/// Expected per-process counter-clockwise sends: 1 + number of zero bits.
std::uint64_t log_election_ccw_per_process(const EncodedId& min_id);

/// Unique leader at the minimum, quiescent termination, exact per-process counts.
Judgement judge_log_election(const RunResult& result, const Arrangement& arrangement,
                             std::uint64_t d);

/// Leader at the minimum id, quiescent, exactly 3 ccw sends and at most
/// U*ID_min + 2n cw sends per process.
Judgement judge_const_direction(const RunResult& result, std::span<const std::uint64_t> ids,
                                std::uint64_t bound);

// --- solitude patterns ------------------------------------------------------

struct SolitudePattern {
    std::uint64_t t = 0;             // ccw receptions before termination
    std::vector<std::uint64_t> cw;   // cw_0 .. cw_t, non-decreasing

    bool operator==(const SolitudePattern&) const = default;
};

/// Runs the machine alone on the self-loop ring, delivering clockwise pulses
/// first. cw_i counts clockwise receptions before the (i+1)-th
/// counter-clockwise reception; cw_t counts them before termination.
/// Throws StepCapExceeded if the machine does not terminate within step_cap,
/// BadParam if it deadlocks.
SolitudePattern solitude_pattern(const std::function<ProtocolMachine()>& factory,
                                 std::uint64_t step_cap = 10'000'000);

}  // namespace obring
