#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "obring/machine.hpp"
#include "obring/ring.hpp"

namespace obring {

// --- delivery strategies ----------------------------------------------------

struct RoundRobin {};
struct SeededRandom {
    std::uint64_t seed = 0;
};
/// Delivers a clockwise pulse whenever one is deliverable.
struct CwPriority {};
/// Follows the listed deliveries in order, then continues round-robin.
struct AdversarialScript {
    std::vector<DeliveryEvent> script;
};

using SchedulerStrategy = std::variant<RoundRobin, SeededRandom, CwPriority, AdversarialScript>;

std::optional<std::uint64_t> seed_of(const SchedulerStrategy& s) noexcept;
std::string strategy_name(const SchedulerStrategy& s);

class DeliveryPolicy {
public:
    virtual ~DeliveryPolicy() = default;
    /// Index into `enabled`, which is non-empty and sorted.
    virtual std::size_t choose(std::span<const DeliveryEvent> enabled) = 0;
};

std::unique_ptr<DeliveryPolicy> make_policy(const SchedulerStrategy& s, std::size_t n);

// --- simulation state -------------------------------------------------------

struct ProcessCounters {
    std::uint64_t sent_cw = 0;
    std::uint64_t sent_ccw = 0;
    std::uint64_t received_cw = 0;
    std::uint64_t received_ccw = 0;

    auto operator<=>(const ProcessCounters&) const = default;
};

struct TraceEvent {
    enum class Kind : std::uint8_t { Resume, Deliver, Send, Return };

    std::uint64_t step = 0;
    Kind kind = Kind::Resume;
    std::size_t proc = 0;
    std::optional<Port> port;
    std::optional<Verdict> verdict;

    bool operator==(const TraceEvent&) const = default;
};

/// `step=<k> kind=<resume|deliver|send|return> proc=<j> port=<0|1|->` plus
/// ` verdict=<leader|non-leader>` on return lines.
std::string format_trace_line(const TraceEvent& ev);
std::string format_trace(std::span<const TraceEvent> trace);

std::string_view to_string(Verdict v) noexcept;

class SimState {
public:
    /// Throws ConfigMismatch when machines.size() != config.n.
    SimState(RingConfig config, std::vector<ProtocolMachine> machines, bool record_trace = false);

    /// Initial resumption of every machine, in index order.
    void start();
    /// Consumes one pulse and runs the target to its next block point.
    void fire(const DeliveryEvent& ev);

    bool all_terminated() const;

    const RingConfig& config() const noexcept { return config_; }
    std::size_t size() const noexcept { return config_.n; }
    const LinkState& links() const noexcept { return links_; }
    const std::vector<ProtocolMachine>& machines() const noexcept { return machines_; }
    const std::vector<ProcessCounters>& counters() const noexcept { return counters_; }
    const std::vector<TraceEvent>& trace() const noexcept { return trace_; }
    std::uint64_t step_count() const noexcept { return step_count_; }
    /// Step at which each process returned, if it has.
    const std::vector<std::optional<std::uint64_t>>& return_steps() const noexcept {
        return return_steps_;
    }
    /// Total pulses in transit at the moment the first Leader returned.
    std::optional<std::uint64_t> in_transit_at_leader_return() const noexcept {
        return in_transit_at_leader_return_;
    }

    /// Canonical encoding of machines, links and counters.
    std::vector<std::int64_t> key() const;

private:
    void apply(std::size_t proc, const Actions& actions);
    void record(TraceEvent::Kind kind, std::size_t proc, std::optional<Port> port,
                std::optional<Verdict> verdict = std::nullopt);

    RingConfig config_;
    LinkState links_;
    std::vector<ProtocolMachine> machines_;
    std::vector<ProcessCounters> counters_;
    std::vector<std::optional<std::uint64_t>> return_steps_;
    std::optional<std::uint64_t> in_transit_at_leader_return_;
    std::vector<TraceEvent> trace_;
    std::uint64_t step_count_ = 0;
    bool record_trace_ = false;
};

/// Deliveries with a pulse in transit whose target is blocked on a matching
/// port, sorted by (target, port). Equal pulses on one link collapse into one
/// event.
std::vector<DeliveryEvent> enabled_events(const SimState& state);

// --- running ----------------------------------------------------------------

enum class TerminalClass : std::uint8_t {
    Quiescent,
    NonQuiescentTermination,
    Deadlock,
    StepCapExceeded,
};

std::string_view to_string(TerminalClass t) noexcept;

using StepObserver = std::function<void(const SimState&)>;

struct RunOptions {
    std::uint64_t step_cap = 10'000'000;
    bool record_trace = false;
    /// Called after the initial resumptions and after every delivery.
    StepObserver observer;
};

struct RunResult {
    std::vector<std::optional<Verdict>> verdicts;  // nullopt = unfinished
    std::vector<ProcessCounters> counters;
    TerminalClass terminal = TerminalClass::Deadlock;
    std::uint64_t steps = 0;
    std::optional<std::uint64_t> seed;
    std::string strategy;
    std::vector<std::optional<std::uint64_t>> return_steps;
    std::optional<std::uint64_t> in_transit_at_leader_return;
    LinkState final_links;
    std::vector<TraceEvent> trace;

    std::vector<std::size_t> leaders() const;
    bool all_decided() const;
};

/// Classifies a state in which no further delivery will happen.
TerminalClass classify(const SimState& state, bool cap_hit);

RunResult run(const RingConfig& config, std::vector<ProtocolMachine> machines,
              const SchedulerStrategy& strategy, const RunOptions& options = {});

}  // namespace obring
