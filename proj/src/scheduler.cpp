#include "obring/scheduler.hpp"

#include <algorithm>
#include <sstream>

#include "obring/error.hpp"
#include "obring/rng.hpp"

namespace obring {

std::optional<std::uint64_t> seed_of(const SchedulerStrategy& s) noexcept {
    if (const auto* r = std::get_if<SeededRandom>(&s)) return r->seed;
    return std::nullopt;
}

std::string strategy_name(const SchedulerStrategy& s) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RoundRobin>) return "round-robin";
            else if constexpr (std::is_same_v<T, SeededRandom>) return "random";
            else if constexpr (std::is_same_v<T, CwPriority>) return "cw-priority";
            else return "script";
        },
        s);
}

namespace {

std::size_t slot_of(const DeliveryEvent& ev) { return ev.target * 2 + static_cast<std::size_t>(ev.port); }

/// Rotating cursor over (target, port) slots; every slot is served within one sweep.
class RoundRobinPolicy final : public DeliveryPolicy {
public:
    explicit RoundRobinPolicy(std::size_t n) : slots_(2 * n) {}

    std::size_t choose(std::span<const DeliveryEvent> enabled) override {
        return pick(enabled, [](const DeliveryEvent&) { return true; });
    }

    template <class Pred>
    std::size_t pick(std::span<const DeliveryEvent> enabled, Pred pred) {
        std::optional<std::size_t> first;
        std::optional<std::size_t> chosen;
        for (std::size_t k = 0; k < enabled.size(); ++k) {
            if (!pred(enabled[k])) continue;
            if (!first) first = k;
            if (slot_of(enabled[k]) >= cursor_) {
                chosen = k;
                break;
            }
        }
        const auto k = chosen ? *chosen : first.value();
        cursor_ = (slot_of(enabled[k]) + 1) % slots_;
        return k;
    }

private:
    std::size_t slots_;
    std::size_t cursor_ = 0;
};

class RandomPolicy final : public DeliveryPolicy {
public:
    explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
    std::size_t choose(std::span<const DeliveryEvent> enabled) override {
        return static_cast<std::size_t>(uniform_below(rng_, enabled.size()));
    }

private:
    Rng rng_;
};

class CwPriorityPolicy final : public DeliveryPolicy {
public:
    explicit CwPriorityPolicy(std::size_t n) : cw_(n), ccw_(n) {}
    std::size_t choose(std::span<const DeliveryEvent> enabled) override {
        const bool any_cw = std::any_of(enabled.begin(), enabled.end(),
                                        [](const DeliveryEvent& e) { return e.clockwise(); });
        if (any_cw) return cw_.pick(enabled, [](const DeliveryEvent& e) { return e.clockwise(); });
        return ccw_.pick(enabled, [](const DeliveryEvent& e) { return !e.clockwise(); });
    }

private:
    RoundRobinPolicy cw_;
    RoundRobinPolicy ccw_;
};

class ScriptPolicy final : public DeliveryPolicy {
public:
    ScriptPolicy(std::vector<DeliveryEvent> script, std::size_t n)
        : script_(std::move(script)), fallback_(n) {}
    std::size_t choose(std::span<const DeliveryEvent> enabled) override {
        if (pos_ >= script_.size()) return fallback_.choose(enabled);
        const auto& want = script_[pos_];
        const auto it = std::find(enabled.begin(), enabled.end(), want);
        if (it == enabled.end())
            throw Error(ErrorCode::ScriptNotEnabled,
                        "script entry " + std::to_string(pos_) + " (proc " +
                            std::to_string(want.target) + ", port " +
                            std::to_string(to_int(want.port)) + ") is not deliverable");
        ++pos_;
        return static_cast<std::size_t>(it - enabled.begin());
    }

private:
    std::vector<DeliveryEvent> script_;
    std::size_t pos_ = 0;
    RoundRobinPolicy fallback_;
};

}  // namespace

std::unique_ptr<DeliveryPolicy> make_policy(const SchedulerStrategy& s, std::size_t n) {
    return std::visit(
        [n](const auto& v) -> std::unique_ptr<DeliveryPolicy> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RoundRobin>) return std::make_unique<RoundRobinPolicy>(n);
            else if constexpr (std::is_same_v<T, SeededRandom>) return std::make_unique<RandomPolicy>(v.seed);
            else if constexpr (std::is_same_v<T, CwPriority>) return std::make_unique<CwPriorityPolicy>(n);
            else return std::make_unique<ScriptPolicy>(v.script, n);
        },
        s);
}

// --- trace ------------------------------------------------------------------

std::string_view to_string(Verdict v) noexcept {
    return v == Verdict::Leader ? "leader" : "non-leader";
}

std::string format_trace_line(const TraceEvent& ev) {
    static constexpr std::string_view kinds[] = {"resume", "deliver", "send", "return"};
    std::ostringstream os;
    os << "step=" << ev.step << " kind=" << kinds[static_cast<int>(ev.kind)] << " proc=" << ev.proc
       << " port=";
    if (ev.port)
        os << to_int(*ev.port);
    else
        os << '-';
    if (ev.verdict) os << " verdict=" << to_string(*ev.verdict);
    return os.str();
}

std::string format_trace(std::span<const TraceEvent> trace) {
    std::string out;
    for (const auto& ev : trace) {
        out += format_trace_line(ev);
        out += '\n';
    }
    return out;
}

// --- SimState ---------------------------------------------------------------

SimState::SimState(RingConfig config, std::vector<ProtocolMachine> machines, bool record_trace)
    : config_(std::move(config)),
      links_(config_.n),
      machines_(std::move(machines)),
      counters_(config_.n),
      return_steps_(config_.n),
      record_trace_(record_trace) {
    config_.validate();
    if (machines_.size() != config_.n)
        throw Error(ErrorCode::ConfigMismatch, std::to_string(machines_.size()) +
                                                   " machines for a ring of " +
                                                   std::to_string(config_.n));
}

void SimState::record(TraceEvent::Kind kind, std::size_t proc, std::optional<Port> port,
                      std::optional<Verdict> verdict) {
    if (record_trace_) trace_.push_back({step_count_, kind, proc, port, verdict});
}

void SimState::apply(std::size_t proc, const Actions& actions) {
    for (const auto& action : actions) {
        if (const auto* send = std::get_if<SendPulse>(&action)) {
            send_in_place(links_, proc, send->port);
            auto& c = counters_[proc];
            (send->port == Port::Zero ? c.sent_cw : c.sent_ccw) += 1;
            record(TraceEvent::Kind::Send, proc, send->port);
        } else {
            const auto verdict = std::get<Return>(action).verdict;
            return_steps_[proc] = step_count_;
            if (verdict == Verdict::Leader && !in_transit_at_leader_return_)
                in_transit_at_leader_return_ = links_.total();
            record(TraceEvent::Kind::Return, proc, std::nullopt, verdict);
        }
    }
}

void SimState::start() {
    for (std::size_t j = 0; j < machines_.size(); ++j) {
        if (machines_[j].started()) continue;
        record(TraceEvent::Kind::Resume, j, std::nullopt);
        apply(j, machines_[j].start());
    }
}

void SimState::fire(const DeliveryEvent& ev) {
    if (ev.target >= config_.n) throw Error(ErrorCode::OutOfRange, "delivery target outside ring");
    auto& machine = machines_[ev.target];
    if (!accepts(machine.blocked_on(), ev.port))
        throw Error(ErrorCode::BadParam, "target is not receiving on that port");
    deliver_in_place(links_, ev);
    ++step_count_;
    auto& c = counters_[ev.target];
    (ev.clockwise() ? c.received_cw : c.received_ccw) += 1;
    record(TraceEvent::Kind::Deliver, ev.target, ev.port);
    apply(ev.target, machine.deliver(ev.port));
}

bool SimState::all_terminated() const {
    return std::all_of(machines_.begin(), machines_.end(),
                       [](const ProtocolMachine& m) { return m.terminated(); });
}

std::vector<std::int64_t> SimState::key() const {
    std::vector<std::int64_t> k;
    k.reserve(machines_.size() * 12);
    for (const auto& m : machines_) {
        k.push_back(m.started() ? 1 : 0);
        m.encode_state(k);
    }
    for (auto v : links_.cw_in_transit) k.push_back(static_cast<std::int64_t>(v));
    for (auto v : links_.ccw_in_transit) k.push_back(static_cast<std::int64_t>(v));
    for (const auto& c : counters_) {
        k.push_back(static_cast<std::int64_t>(c.sent_cw));
        k.push_back(static_cast<std::int64_t>(c.sent_ccw));
        k.push_back(static_cast<std::int64_t>(c.received_cw));
        k.push_back(static_cast<std::int64_t>(c.received_ccw));
    }
    return k;
}

std::vector<DeliveryEvent> enabled_events(const SimState& state) {
    std::vector<DeliveryEvent> out;
    const auto& links = state.links();
    for (std::size_t j = 0; j < state.size(); ++j) {
        const auto blocked = state.machines()[j].blocked_on();
        for (auto port : {Port::Zero, Port::One}) {
            const DeliveryEvent ev{j, port};
            if (accepts(blocked, port) && available(links, ev) > 0) out.push_back(ev);
        }
    }
    return out;
}

// --- run --------------------------------------------------------------------

std::string_view to_string(TerminalClass t) noexcept {
    switch (t) {
        case TerminalClass::Quiescent: return "quiescent";
        case TerminalClass::NonQuiescentTermination: return "non-quiescent-termination";
        case TerminalClass::Deadlock: return "deadlock";
        case TerminalClass::StepCapExceeded: return "step-cap-exceeded";
    }
    return "?";
}

std::vector<std::size_t> RunResult::leaders() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < verdicts.size(); ++j)
        if (verdicts[j] == Verdict::Leader) out.push_back(j);
    return out;
}

bool RunResult::all_decided() const {
    return std::all_of(verdicts.begin(), verdicts.end(),
                       [](const auto& v) { return v.has_value(); });
}

TerminalClass classify(const SimState& state, bool cap_hit) {
    if (state.all_terminated())
        return state.links().total() == 0 ? TerminalClass::Quiescent
                                          : TerminalClass::NonQuiescentTermination;
    return cap_hit ? TerminalClass::StepCapExceeded : TerminalClass::Deadlock;
}

RunResult run(const RingConfig& config, std::vector<ProtocolMachine> machines,
              const SchedulerStrategy& strategy, const RunOptions& options) {
    SimState state(config, std::move(machines), options.record_trace);
    auto policy = make_policy(strategy, config.n);
    state.start();
    if (options.observer) options.observer(state);

    bool cap_hit = false;
    std::vector<DeliveryEvent> enabled;
    while (!state.all_terminated()) {
        enabled = enabled_events(state);
        if (enabled.empty()) break;
        if (state.step_count() >= options.step_cap) {
            cap_hit = true;
            break;
        }
        state.fire(enabled[policy->choose(enabled)]);
        if (options.observer) options.observer(state);
    }

    RunResult result;
    result.terminal = classify(state, cap_hit);
    result.steps = state.step_count();
    result.seed = seed_of(strategy);
    result.strategy = strategy_name(strategy);
    result.counters = state.counters();
    result.return_steps = state.return_steps();
    result.in_transit_at_leader_return = state.in_transit_at_leader_return();
    result.final_links = state.links();
    result.verdicts.reserve(config.n);
    for (const auto& m : state.machines()) result.verdicts.push_back(verdict_of(m.blocked_on()));
    result.trace = state.trace();
    return result;
}

}  // namespace obring
