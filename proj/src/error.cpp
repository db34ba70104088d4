#include "obring/error.hpp"

namespace obring {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyLink: return "EmptyLink";
        case ErrorCode::InvalidId: return "InvalidId";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NoUniqueMin: return "NoUniqueMin";
        case ErrorCode::BadParam: return "BadParam";
        case ErrorCode::AlreadyTerminated: return "AlreadyTerminated";
        case ErrorCode::ConfigMismatch: return "ConfigMismatch";
        case ErrorCode::StateCapExceeded: return "StateCapExceeded";
        case ErrorCode::StepCapExceeded: return "StepCapExceeded";
        case ErrorCode::ScriptNotEnabled: return "ScriptNotEnabled";
    }
    return "Unknown";
}

}  // namespace obring
