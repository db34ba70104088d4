#include "obring/machine.hpp"

#include "obring/error.hpp"

namespace obring {

Actions ProtocolMachine::start() {
    if (started_) throw Error(ErrorCode::BadParam, "machine already started");
    started_ = true;
    return impl_->start();
}

Actions ProtocolMachine::deliver(Port port) {
    if (!started_) throw Error(ErrorCode::BadParam, "machine not started");
    const auto blocked = impl_->blocked_on();
    if (is_terminated(blocked)) throw Error(ErrorCode::AlreadyTerminated, "machine has returned");
    if (!accepts(blocked, port))
        throw Error(ErrorCode::BadParam,
                    "machine not receiving on port " + std::to_string(to_int(port)));
    return impl_->deliver(port);
}

}  // namespace obring
