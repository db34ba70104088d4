#pragma once

#include <concepts>
#include <cstdint>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "obring/ring.hpp"

namespace obring {

/// A resumable process. `start` runs the code up to the first blocking
/// receive; `deliver` consumes one pulse on a port the process is blocked on
/// and runs to the next block point. Local computation between receives is
/// atomic.
class Process {
public:
    virtual ~Process() = default;

    virtual Actions start() = 0;
    virtual Actions deliver(Port port) = 0;
    virtual BlockedOn blocked_on() const = 0;
    virtual std::string_view phase_name() const = 0;
    /// Appends a canonical encoding of the full local state (used to
    /// deduplicate states during exhaustive exploration).
    virtual void encode_state(std::vector<std::int64_t>& out) const = 0;
    virtual std::unique_ptr<Process> clone() const = 0;
};

/// Value-semantic handle around a Process.
class ProtocolMachine {
public:
    template <class P>
        requires std::derived_from<P, Process>
    explicit ProtocolMachine(P process) : impl_(std::make_unique<P>(std::move(process))) {}

    ProtocolMachine(const ProtocolMachine& other)
        : impl_(other.impl_->clone()), started_(other.started_) {}
    ProtocolMachine& operator=(const ProtocolMachine& other) {
        if (this != &other) {
            impl_ = other.impl_->clone();
            started_ = other.started_;
        }
        return *this;
    }
    ProtocolMachine(ProtocolMachine&&) noexcept = default;
    ProtocolMachine& operator=(ProtocolMachine&&) noexcept = default;

    Actions start();
    /// Throws AlreadyTerminated on a finished machine and BadParam when the
    /// machine is not blocked on `port`.
    Actions deliver(Port port);

    bool started() const noexcept { return started_; }
    BlockedOn blocked_on() const { return impl_->blocked_on(); }
    bool terminated() const { return is_terminated(impl_->blocked_on()); }
    std::string_view phase_name() const { return impl_->phase_name(); }
    void encode_state(std::vector<std::int64_t>& out) const { impl_->encode_state(out); }

    const Process& process() const noexcept { return *impl_; }

private:
    std::unique_ptr<Process> impl_;
    bool started_ = false;
};

}  // namespace obring
