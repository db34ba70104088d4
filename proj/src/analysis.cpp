#include "obring/analysis.hpp"

#include <algorithm>

#include "obring/error.hpp"

namespace obring {

namespace {

void fail(Judgement& j, bool Judgement::*flag, const char* name, std::string detail,
          std::optional<std::uint64_t> step = std::nullopt) {
    j.*flag = false;
    j.violated.push_back({name, std::move(detail), step});
}

void check_leader(Judgement& j, const RunResult& r, std::optional<std::size_t> expected) {
    const auto leaders = r.leaders();
    if (!expected) {
        fail(j, &Judgement::leader_ok, "leader_ok", "no unique minimum identifier");
        return;
    }
    if (leaders.size() != 1) {
        fail(j, &Judgement::leader_ok, "leader_ok",
             std::to_string(leaders.size()) + " processes returned Leader");
        return;
    }
    if (leaders.front() != *expected) {
        fail(j, &Judgement::leader_ok, "leader_ok",
             "leader is p_" + std::to_string(leaders.front()) + ", expected p_" +
                 std::to_string(*expected),
             r.return_steps.empty() ? std::nullopt : r.return_steps[leaders.front()]);
        return;
    }
    for (std::size_t k = 0; k < r.verdicts.size(); ++k) {
        if (k != *expected && r.verdicts[k] != Verdict::NonLeader) {
            fail(j, &Judgement::leader_ok, "leader_ok",
                 "p_" + std::to_string(k) + " did not return NonLeader");
            return;
        }
    }
}

void check_quiescent(Judgement& j, const RunResult& r) {
    if (r.terminal != TerminalClass::Quiescent)
        fail(j, &Judgement::quiescent_ok, "quiescent_ok",
             "run ended " + std::string(to_string(r.terminal)), r.steps);
    else if (r.in_transit_at_leader_return.value_or(0) != 0)
        fail(j, &Judgement::quiescent_ok, "quiescent_ok",
             std::to_string(*r.in_transit_at_leader_return) +
                 " pulses in transit when the leader returned");
}

}  // namespace

std::uint64_t log_election_cw_per_process(const EncodedId& min_id, std::uint64_t d) {
    return (2 * static_cast<std::uint64_t>(min_id.length()) - 1) * d;
}

std::uint64_t log_election_ccw_per_process(const EncodedId& min_id) {
    return 1 + static_cast<std::uint64_t>(min_id.zero_count());
}

Judgement judge_log_election(const RunResult& result, const Arrangement& arrangement,
                             std::uint64_t d) {
    Judgement j;
    std::optional<std::size_t> min_index;
    try {
        min_index = min_id_index(arrangement);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoUniqueMin) throw;
    }
    check_leader(j, result, min_index);
    check_quiescent(j, result);

    // With a tie the expected counts still follow from the smallest identifier.
    const auto& min_id = min_index ? arrangement[*min_index]
                                   : *std::min_element(arrangement.begin(), arrangement.end(),
                                                       [](const EncodedId& a, const EncodedId& b) {
                                                           return a.value() < b.value();
                                                       });
    const auto cw = log_election_cw_per_process(min_id, d);
    const auto ccw = log_election_ccw_per_process(min_id);
    for (std::size_t k = 0; k < result.counters.size(); ++k) {
        const auto& c = result.counters[k];
        if (j.cw_count_ok && c.sent_cw != cw)
            fail(j, &Judgement::cw_count_ok, "cw_count_ok",
                 "p_" + std::to_string(k) + " sent " + std::to_string(c.sent_cw) +
                     " clockwise, expected " + std::to_string(cw));
        if (j.ccw_count_ok && c.sent_ccw != ccw)
            fail(j, &Judgement::ccw_count_ok, "ccw_count_ok",
                 "p_" + std::to_string(k) + " sent " + std::to_string(c.sent_ccw) +
                     " counter-clockwise, expected " + std::to_string(ccw));
    }
    return j;
}

Judgement judge_const_direction(const RunResult& result, std::span<const std::uint64_t> ids,
                                std::uint64_t bound) {
    Judgement j;
    if (ids.empty()) throw Error(ErrorCode::BadParam, "no identifiers");
    const auto min_it = std::min_element(ids.begin(), ids.end());
    const bool unique = std::count(ids.begin(), ids.end(), *min_it) == 1;
    check_leader(j, result,
                 unique ? std::optional<std::size_t>(static_cast<std::size_t>(min_it - ids.begin()))
                        : std::nullopt);
    check_quiescent(j, result);

    const auto cw_cap = bound * *min_it + 2 * static_cast<std::uint64_t>(ids.size());
    for (std::size_t k = 0; k < result.counters.size(); ++k) {
        const auto& c = result.counters[k];
        if (j.cw_count_ok && c.sent_cw > cw_cap)
            fail(j, &Judgement::cw_count_ok, "cw_count_ok",
                 "p_" + std::to_string(k) + " sent " + std::to_string(c.sent_cw) +
                     " clockwise, bound " + std::to_string(cw_cap));
        if (j.ccw_count_ok && c.sent_ccw != 3)
            fail(j, &Judgement::ccw_count_ok, "ccw_count_ok",
                 "p_" + std::to_string(k) + " sent " + std::to_string(c.sent_ccw) +
                     " counter-clockwise, expected 3");
    }
    return j;
}

SolitudePattern solitude_pattern(const std::function<ProtocolMachine()>& factory,
                                 std::uint64_t step_cap) {
    RingConfig solo{1, 1, {}};
    std::vector<ProtocolMachine> machines;
    machines.push_back(factory());
    RunOptions options;
    options.step_cap = step_cap;
    options.record_trace = true;
    const auto result = run(solo, std::move(machines), CwPriority{}, options);
    if (result.terminal == TerminalClass::StepCapExceeded)
        throw Error(ErrorCode::StepCapExceeded, "solitary execution did not terminate");
    if (result.terminal == TerminalClass::Deadlock)
        throw Error(ErrorCode::BadParam, "solitary execution deadlocked");

    SolitudePattern pattern;
    std::uint64_t cw_seen = 0;
    for (const auto& ev : result.trace) {
        if (ev.kind != TraceEvent::Kind::Deliver) continue;
        if (ev.port == Port::One) {
            ++cw_seen;
        } else {
            pattern.cw.push_back(cw_seen);
            ++pattern.t;
        }
    }
    pattern.cw.push_back(cw_seen);
    return pattern;
}

}  // namespace obring
