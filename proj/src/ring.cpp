#include "obring/ring.hpp"

#include <numeric>
#include <string>

#include "obring/error.hpp"

namespace obring {

void RingConfig::validate() const {
    if (n == 0) throw Error(ErrorCode::BadParam, "ring size must be positive");
    if (bound == 0) throw Error(ErrorCode::BadParam, "bound U must be positive");
    if (!ids.empty() && ids.size() != n)
        throw Error(ErrorCode::BadParam,
                    "expected " + std::to_string(n) + " ids, got " + std::to_string(ids.size()));
}

Neighbors neighbors(std::size_t j, std::size_t n) {
    if (n == 0 || j >= n) throw Error(ErrorCode::OutOfRange, "process index outside ring");
    return {(j + 1) % n, (j + n - 1) % n};
}

std::uint64_t LinkState::total_cw() const noexcept {
    return std::accumulate(cw_in_transit.begin(), cw_in_transit.end(), std::uint64_t{0});
}

std::uint64_t LinkState::total_ccw() const noexcept {
    return std::accumulate(ccw_in_transit.begin(), ccw_in_transit.end(), std::uint64_t{0});
}

std::size_t source_of(const DeliveryEvent& ev, std::size_t n) noexcept {
    // Clockwise pulses arrive from p_{j-1}, counter-clockwise ones from p_{j+1}.
    return ev.clockwise() ? (ev.target + n - 1) % n : (ev.target + 1) % n;
}

std::uint64_t available(const LinkState& state, const DeliveryEvent& ev) noexcept {
    const auto src = source_of(ev, state.size());
    return ev.clockwise() ? state.cw_in_transit[src] : state.ccw_in_transit[src];
}

void send_in_place(LinkState& state, std::size_t sender, Port port) {
    if (sender >= state.size()) throw Error(ErrorCode::OutOfRange, "sender outside ring");
    if (port == Port::Zero)
        ++state.cw_in_transit[sender];
    else
        ++state.ccw_in_transit[sender];
}

void deliver_in_place(LinkState& state, const DeliveryEvent& ev) {
    if (ev.target >= state.size()) throw Error(ErrorCode::OutOfRange, "target outside ring");
    const auto src = source_of(ev, state.size());
    auto& counter = ev.clockwise() ? state.cw_in_transit[src] : state.ccw_in_transit[src];
    if (counter == 0)
        throw Error(ErrorCode::EmptyLink, "no pulse in transit toward p_" +
                                              std::to_string(ev.target) + " on port " +
                                              std::to_string(to_int(ev.port)));
    --counter;
}

LinkState apply_send(LinkState state, std::size_t sender, Port port) {
    send_in_place(state, sender, port);
    return state;
}

LinkState apply_delivery(LinkState state, const DeliveryEvent& ev) {
    deliver_in_place(state, ev);
    return state;
}

bool accepts(const BlockedOn& blocked, Port port) noexcept {
    if (const auto* sp = std::get_if<SpecificPort>(&blocked)) return sp->port == port;
    return std::holds_alternative<AnyPort>(blocked);
}

bool is_terminated(const BlockedOn& blocked) noexcept {
    return std::holds_alternative<Terminated>(blocked);
}

std::optional<Verdict> verdict_of(const BlockedOn& blocked) noexcept {
    if (const auto* t = std::get_if<Terminated>(&blocked)) return t->verdict;
    return std::nullopt;
}

}  // namespace obring
