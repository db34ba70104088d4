#include "obring/protocols.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "obring/error.hpp"

namespace obring {

// --- kill and relay ---------------------------------------------------------

KillRelayStep kill_and_relay_step(KillRelayState state, Port delivered) {
    if (state.terminated())
        throw Error(ErrorCode::AlreadyTerminated, "relay already returned NonLeader");
    KillRelayStep step{state, {}};
    if (delivered == Port::One) {
        if (!step.state.killed) {
            step.state.killed = true;
            return step;
        }
        step.state.consecutive_ccw = 0;
    } else {
        ++step.state.consecutive_ccw;
    }
    // Forward in the direction of travel, then check the exit guard.
    step.actions.emplace_back(SendPulse{opposite(delivered)});
    if (step.state.terminated()) step.actions.emplace_back(Return{Verdict::NonLeader});
    return step;
}

// --- logarithmic election ---------------------------------------------------

std::string_view to_string(LogElection::Phase p) noexcept {
    switch (p) {
        case LogElection::Phase::Synchronization: return "synchronization";
        case LogElection::Phase::ZeroSignaling: return "zero-signaling";
        case LogElection::Phase::Termination: return "termination";
        case LogElection::Phase::NoZeroChecking: return "no-zero-checking";
        case LogElection::Phase::Inactive: return "inactive";
        case LogElection::Phase::Done: return "done";
    }
    return "?";
}

LogElection::LogElection(EncodedId id, std::uint64_t d) : id_(id), d_(d) {
    if (d == 0) throw Error(ErrorCode::BadParam, "d must be positive");
    if (id.bit(id.length()) != 0)
        throw Error(ErrorCode::BadParam, "identifier " + id.to_string() + " is not 0-ended");
}

void LogElection::begin_round(Actions& out) {
    phase_ = Phase::Synchronization;
    out.emplace_back(SendPulse{Port::Zero});
}

void LogElection::finish(Verdict v, Actions& out) {
    phase_ = Phase::Done;
    verdict_ = v;
    out.emplace_back(Return{v});
}

Actions LogElection::start() {
    Actions out;
    round_ = 1;
    begin_round(out);
    return out;
}

Actions LogElection::deliver(Port port) {
    Actions out;
    const std::uint64_t i = round_;
    switch (phase_) {
        case Phase::Synchronization:
            ++received_cw_;
            if (received_cw_ != (2 * i - 1) * d_) {
                out.emplace_back(SendPulse{Port::Zero});
            } else if (id_.bit(round_) == 0) {
                phase_ = Phase::ZeroSignaling;
                out.emplace_back(SendPulse{Port::One});
            } else {
                phase_ = Phase::NoZeroChecking;
                out.emplace_back(SendPulse{Port::Zero});
            }
            break;
        case Phase::ZeroSignaling:
            if (round_ == id_.length()) {
                phase_ = Phase::Termination;
                out.emplace_back(SendPulse{Port::One});
            } else {
                ++round_;
                begin_round(out);
            }
            break;
        case Phase::Termination:
            finish(Verdict::Leader, out);
            break;
        case Phase::NoZeroChecking:
            if (port == Port::One) {
                ++received_cw_;
                if (received_cw_ == 2 * i * d_) {
                    ++round_;
                    begin_round(out);
                } else {
                    out.emplace_back(SendPulse{Port::Zero});
                }
            } else {
                // Eliminated: forward the counter-clockwise pulse and start relaying.
                phase_ = Phase::Inactive;
                relay_ = {};
                out.emplace_back(SendPulse{Port::One});
            }
            break;
        case Phase::Inactive: {
            auto step = kill_and_relay_step(relay_, port);
            relay_ = step.state;
            out = std::move(step.actions);
            if (relay_.terminated()) {
                phase_ = Phase::Done;
                verdict_ = Verdict::NonLeader;
            }
            break;
        }
        case Phase::Done:
            throw Error(ErrorCode::AlreadyTerminated, "election already returned");
    }
    return out;
}

BlockedOn LogElection::blocked_on() const {
    switch (phase_) {
        case Phase::Synchronization: return SpecificPort{Port::One};
        case Phase::ZeroSignaling:
        case Phase::Termination: return SpecificPort{Port::Zero};
        case Phase::NoZeroChecking:
        case Phase::Inactive: return AnyPort{};
        case Phase::Done: break;
    }
    return Terminated{verdict_};
}

std::string_view LogElection::phase_name() const { return to_string(phase_); }

void LogElection::encode_state(std::vector<std::int64_t>& out) const {
    out.push_back(static_cast<std::int64_t>(phase_));
    out.push_back(static_cast<std::int64_t>(round_));
    out.push_back(static_cast<std::int64_t>(received_cw_));
    out.push_back(relay_.consecutive_ccw);
    out.push_back(relay_.killed ? 1 : 0);
    out.push_back(static_cast<std::int64_t>(verdict_));
}

std::unique_ptr<Process> LogElection::clone() const { return std::make_unique<LogElection>(*this); }

ProtocolMachine log_election_new(const EncodedId& id, std::uint64_t d) {
    return ProtocolMachine(LogElection(id, d));
}

// --- constant counter-clockwise election ------------------------------------

std::string_view to_string(ConstDirection::Phase p) noexcept {
    switch (p) {
        case ConstDirection::Phase::Competing: return "competing";
        case ConstDirection::Phase::RelayKill: return "relay-kill";
        case ConstDirection::Phase::Relay: return "relay";
        case ConstDirection::Phase::LeaderAnnounce: return "leader-announce";
        case ConstDirection::Phase::LeaderDrain: return "leader-drain";
        case ConstDirection::Phase::LeaderFinal: return "leader-final";
        case ConstDirection::Phase::Done: return "done";
    }
    return "?";
}

ConstDirection::ConstDirection(std::uint64_t id, std::uint64_t bound) : id_(id), bound_(bound) {
    if (id == 0 || bound == 0) throw Error(ErrorCode::BadParam, "id and U must be positive");
}

Actions ConstDirection::start() {
    iteration_ = 1;
    phase_ = Phase::Competing;
    return {SendPulse{Port::Zero}};
}

Actions ConstDirection::deliver(Port port) {
    Actions out;
    switch (phase_) {
        case Phase::Competing:
            if (port == Port::Zero) {
                // Someone else finished competing: announce onward and drop out.
                phase_ = Phase::RelayKill;
                out.emplace_back(SendPulse{Port::One});
            } else if (iteration_ == iterations_total()) {
                phase_ = Phase::LeaderAnnounce;
                out.emplace_back(SendPulse{Port::One});
            } else {
                ++iteration_;
                out.emplace_back(SendPulse{Port::Zero});
            }
            break;
        case Phase::RelayKill:
            phase_ = Phase::Relay;
            break;
        case Phase::Relay:
            out.emplace_back(SendPulse{opposite(port)});
            if (port == Port::Zero && ++relay_ccw_seen_ == 2) {
                phase_ = Phase::Done;
                verdict_ = Verdict::NonLeader;
                out.emplace_back(Return{Verdict::NonLeader});
            }
            break;
        case Phase::LeaderAnnounce:
            phase_ = Phase::LeaderDrain;
            out.emplace_back(SendPulse{Port::One});
            break;
        case Phase::LeaderDrain:
            if (port == Port::One) {
                out.emplace_back(SendPulse{Port::Zero});
            } else {
                phase_ = Phase::LeaderFinal;
                out.emplace_back(SendPulse{Port::One});
            }
            break;
        case Phase::LeaderFinal:
            phase_ = Phase::Done;
            verdict_ = Verdict::Leader;
            out.emplace_back(Return{Verdict::Leader});
            break;
        case Phase::Done:
            throw Error(ErrorCode::AlreadyTerminated, "election already returned");
    }
    return out;
}

BlockedOn ConstDirection::blocked_on() const {
    switch (phase_) {
        case Phase::Competing:
        case Phase::Relay:
        case Phase::LeaderDrain: return AnyPort{};
        case Phase::RelayKill: return SpecificPort{Port::One};
        case Phase::LeaderAnnounce:
        case Phase::LeaderFinal: return SpecificPort{Port::Zero};
        case Phase::Done: break;
    }
    return Terminated{verdict_};
}

std::string_view ConstDirection::phase_name() const { return to_string(phase_); }

void ConstDirection::encode_state(std::vector<std::int64_t>& out) const {
    out.push_back(static_cast<std::int64_t>(phase_));
    out.push_back(static_cast<std::int64_t>(iteration_));
    out.push_back(relay_ccw_seen_);
    out.push_back(static_cast<std::int64_t>(verdict_));
}

std::unique_ptr<Process> ConstDirection::clone() const {
    return std::make_unique<ConstDirection>(*this);
}

ProtocolMachine const_direction_new(std::uint64_t id, std::uint64_t bound) {
    return ProtocolMachine(ConstDirection(id, bound));
}

// --- randomized election ----------------------------------------------------

std::uint64_t ceil_c_log2(std::uint64_t c, std::uint64_t u) {
    if (u == 0) throw Error(ErrorCode::BadParam, "log of zero");
    using boost::multiprecision::cpp_int;
    const cpp_int power = boost::multiprecision::pow(cpp_int(u), static_cast<unsigned>(c));
    if (power <= 1) return 0;
    return static_cast<std::uint64_t>(boost::multiprecision::msb(cpp_int(power - 1))) + 1;
}

RandomizedParams RandomizedParams::with_c(std::uint64_t bound, std::uint64_t c, std::uint64_t seed) {
    return RandomizedParams{bound, c, c + 2, c + 2, seed};
}

void RandomizedParams::validate() const {
    if (bound == 0) throw Error(ErrorCode::BadParam, "U must be positive");
    if (c1 == 0 || c2 == 0) throw Error(ErrorCode::BadParam, "c1 and c2 must be positive");
    if (id_exponent() + 2 > EncodedId::kMaxLength)
        throw Error(ErrorCode::BadParam, "identifiers would exceed 64 bits");
}

std::uint64_t RandomizedParams::id_exponent() const { return ceil_c_log2(c1, bound); }

std::size_t RandomizedParams::id_length() const {
    return static_cast<std::size_t>(id_exponent()) + 2;
}

std::uint64_t RandomizedParams::d() const { return std::max<std::uint64_t>(1, ceil_c_log2(c2, bound)); }

std::uint64_t randomized_id_from_draw(const RandomizedParams& params, std::uint64_t rand) {
    params.validate();
    const std::uint64_t span = std::uint64_t{1} << params.id_exponent();
    if (rand >= span) throw Error(ErrorCode::OutOfRange, "draw outside [0, 2^k)");
    return 2 * (span + rand);
}

std::uint64_t randomized_make_id(const RandomizedParams& params, Rng& rng) {
    params.validate();
    const std::uint64_t span = std::uint64_t{1} << params.id_exponent();
    return randomized_id_from_draw(params, uniform_below(rng, span));
}

ProtocolMachine randomized_election_from_id(const RandomizedParams& params, std::uint64_t id) {
    return log_election_new(EncodedId::from_raw(id), params.d());
}

ProtocolMachine randomized_election_new(const RandomizedParams& params, Rng& rng) {
    return randomized_election_from_id(params, randomized_make_id(params, rng));
}

}  // namespace obring
