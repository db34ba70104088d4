#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "obring/id_codec.hpp"
#include "obring/machine.hpp"
#include "obring/ring.hpp"
#include "obring/rng.hpp"

namespace obring {

// ---------------------------------------------------------------------------
// Kill-one-clockwise-pulse relay. Run by a process eliminated from the
// logarithmic election: it swallows the first clockwise pulse it receives,
// relays everything else in the direction of travel, and returns NonLeader
// after relaying two consecutive counter-clockwise pulses.
// ---------------------------------------------------------------------------

struct KillRelayState {
    std::uint8_t consecutive_ccw = 0;
    bool killed = false;

    bool terminated() const noexcept { return consecutive_ccw >= 2; }
    bool operator==(const KillRelayState&) const = default;
};

struct KillRelayStep {
    KillRelayState state;
    Actions actions;
};

/// Throws AlreadyTerminated if `state` has already returned.
KillRelayStep kill_and_relay_step(KillRelayState state, Port delivered);

// ---------------------------------------------------------------------------
// Logarithmic election: round i compares bit i of the (0-ended, strongly
// prefix-free) identifier among the processes still active.
// ---------------------------------------------------------------------------

class LogElection final : public Process {
public:
    enum class Phase : std::uint8_t {
        Synchronization,  // send on 0 / receive on 1 until received_cw = (2i-1)d
        ZeroSignaling,    // bit 0: announced on port 1, waiting for it on port 0
        Termination,      // won the last round: second announcement in flight
        NoZeroChecking,   // bit 1: keep the clockwise beat until 2id or a ccw pulse
        Inactive,         // eliminated, running the kill-and-relay loop
        Done,
    };

    /// Throws BadParam for d == 0 or an identifier whose last bit is 1.
    LogElection(EncodedId id, std::uint64_t d);

    Actions start() override;
    Actions deliver(Port port) override;
    BlockedOn blocked_on() const override;
    std::string_view phase_name() const override;
    void encode_state(std::vector<std::int64_t>& out) const override;
    std::unique_ptr<Process> clone() const override;

    Phase phase() const noexcept { return phase_; }
    std::size_t round() const noexcept { return round_; }
    std::uint64_t received_cw() const noexcept { return received_cw_; }
    const KillRelayState& relay_state() const noexcept { return relay_; }
    const EncodedId& id() const noexcept { return id_; }
    std::uint64_t d() const noexcept { return d_; }

private:
    void begin_round(Actions& out);
    void finish(Verdict v, Actions& out);

    EncodedId id_;
    std::uint64_t d_;
    std::size_t round_ = 1;
    std::uint64_t received_cw_ = 0;
    Phase phase_ = Phase::Synchronization;
    KillRelayState relay_;
    Verdict verdict_ = Verdict::NonLeader;
};

std::string_view to_string(LogElection::Phase p) noexcept;

ProtocolMachine log_election_new(const EncodedId& id, std::uint64_t d);

// ---------------------------------------------------------------------------
// Election with exactly three counter-clockwise pulses per process, given a
// bound U >= n. The competing phase runs U*ID clockwise beats; only the
// minimum identifier completes it.
// ---------------------------------------------------------------------------

class ConstDirection final : public Process {
public:
    enum class Phase : std::uint8_t {
        Competing,         // send on 0, receive any, for U*ID iterations
        RelayKill,         // lost: waiting to swallow one clockwise pulse
        Relay,             // relaying both directions until two ccw pulses
        LeaderAnnounce,    // first ccw pulse travelling round the ring
        LeaderDrain,       // second ccw pulse sweeping leftover cw pulses
        LeaderFinal,       // third ccw pulse, which terminates the relays
        Done,
    };

    /// Throws BadParam when id or bound is zero.
    ConstDirection(std::uint64_t id, std::uint64_t bound);

    Actions start() override;
    Actions deliver(Port port) override;
    BlockedOn blocked_on() const override;
    std::string_view phase_name() const override;
    void encode_state(std::vector<std::int64_t>& out) const override;
    std::unique_ptr<Process> clone() const override;

    Phase phase() const noexcept { return phase_; }
    std::uint64_t iteration() const noexcept { return iteration_; }
    std::uint64_t iterations_total() const noexcept { return id_ * bound_; }

private:
    std::uint64_t id_;
    std::uint64_t bound_;
    std::uint64_t iteration_ = 1;
    std::uint8_t relay_ccw_seen_ = 0;
    Phase phase_ = Phase::Competing;
    Verdict verdict_ = Verdict::NonLeader;
};

std::string_view to_string(ConstDirection::Phase p) noexcept;

ProtocolMachine const_direction_new(std::uint64_t id, std::uint64_t bound);

// ---------------------------------------------------------------------------
// Randomized election for anonymous rings: draw a fixed-length identifier and
// run the logarithmic election with d = ceil(c2 log2 U).
// ---------------------------------------------------------------------------

/// ceil(c * log2(u)) computed exactly as the smallest m with 2^m >= u^c.
std::uint64_t ceil_c_log2(std::uint64_t c, std::uint64_t u);

struct RandomizedParams {
    std::uint64_t bound = 2;  // U
    std::uint64_t c = 1;
    std::uint64_t c1 = 3;
    std::uint64_t c2 = 3;
    std::uint64_t rng_seed = 0;

    /// c1 = c2 = c + 2.
    static RandomizedParams with_c(std::uint64_t bound, std::uint64_t c, std::uint64_t seed = 0);

    /// Throws BadParam for U == 0, zero constants, or identifiers over 64 bits.
    void validate() const;

    /// k = ceil(c1 log2 U); rand is drawn from [0, 2^k).
    std::uint64_t id_exponent() const;
    /// Bit length of every identifier, k + 2.
    std::size_t id_length() const;
    /// ceil(c2 log2 U), at least 1.
    std::uint64_t d() const;
};

/// 2 * (2^k + rand) for the given rand value; throws OutOfRange if rand >= 2^k.
std::uint64_t randomized_id_from_draw(const RandomizedParams& params, std::uint64_t rand);
std::uint64_t randomized_make_id(const RandomizedParams& params, Rng& rng);

/// Runs the logarithmic election on the raw identifier bits (no re-encoding).
ProtocolMachine randomized_election_from_id(const RandomizedParams& params, std::uint64_t id);
ProtocolMachine randomized_election_new(const RandomizedParams& params, Rng& rng);

}  // namespace obring
