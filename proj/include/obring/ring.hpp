#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace obring {

/// Port 0 leads clockwise to p_{j+1}; port 1 leads counter-clockwise to p_{j-1}.
enum class Port : std::uint8_t { Zero = 0, One = 1 };

constexpr int to_int(Port p) noexcept { return static_cast<int>(p); }
constexpr Port opposite(Port p) noexcept { return p == Port::Zero ? Port::One : Port::Zero; }

enum class Verdict : std::uint8_t { Leader, NonLeader };

struct RingConfig {
    std::size_t n = 1;
    std::uint64_t bound = 1;            // U
    std::vector<std::uint64_t> ids;     // empty for anonymous runs

    /// Throws BadParam when n == 0 or ids has the wrong length.
    void validate() const;
};

struct Neighbors {
    std::size_t cw_successor;
    std::size_t ccw_successor;
    bool operator==(const Neighbors&) const = default;
};

Neighbors neighbors(std::size_t j, std::size_t n);

/// In-transit pulse counts per directed link. Pulses carry nothing, so a count
/// is the whole link state.
struct LinkState {
    std::vector<std::uint64_t> cw_in_transit;   // [j]: sent by p_j on port 0, not yet received by p_{j+1}
    std::vector<std::uint64_t> ccw_in_transit;  // [j]: sent by p_j on port 1, not yet received by p_{j-1}

    LinkState() = default;
    explicit LinkState(std::size_t n) : cw_in_transit(n, 0), ccw_in_transit(n, 0) {}

    std::size_t size() const noexcept { return cw_in_transit.size(); }
    std::uint64_t total_cw() const noexcept;
    std::uint64_t total_ccw() const noexcept;
    std::uint64_t total() const noexcept { return total_cw() + total_ccw(); }

    bool operator==(const LinkState&) const = default;
};

/// Delivery to `target` on the receiving port: port 1 (Ccw) receives a clockwise
/// pulse, port 0 (Cw) receives a counter-clockwise pulse.
struct DeliveryEvent {
    std::size_t target = 0;
    Port port = Port::One;

    bool clockwise() const noexcept { return port == Port::One; }
    auto operator<=>(const DeliveryEvent&) const = default;
};

/// Index of the link counter a delivery consumes, in the direction implied by the port.
std::size_t source_of(const DeliveryEvent& ev, std::size_t n) noexcept;
std::uint64_t available(const LinkState& state, const DeliveryEvent& ev) noexcept;

LinkState apply_send(LinkState state, std::size_t sender, Port port);
/// Throws EmptyLink when the source counter is zero.
LinkState apply_delivery(LinkState state, const DeliveryEvent& ev);

void send_in_place(LinkState& state, std::size_t sender, Port port);
void deliver_in_place(LinkState& state, const DeliveryEvent& ev);

// Blocking descriptors and actions shared by every protocol machine.

struct SpecificPort {
    Port port;
    bool operator==(const SpecificPort&) const = default;
};
struct AnyPort {
    bool operator==(const AnyPort&) const = default;
};
struct Terminated {
    Verdict verdict;
    bool operator==(const Terminated&) const = default;
};
using BlockedOn = std::variant<SpecificPort, AnyPort, Terminated>;

bool accepts(const BlockedOn& blocked, Port port) noexcept;
bool is_terminated(const BlockedOn& blocked) noexcept;
std::optional<Verdict> verdict_of(const BlockedOn& blocked) noexcept;

struct SendPulse {
    Port port;
    bool operator==(const SendPulse&) const = default;
};
struct Return {
    Verdict verdict;
    bool operator==(const Return&) const = default;
};
using ProcessAction = std::variant<SendPulse, Return>;
using Actions = std::vector<ProcessAction>;

}  // namespace obring
