#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace identkit {

enum class ErrorCode {
    DuplicateEdge,
    SelfLoop,
    VertexOutOfRange,
    EmptyInputSet,
    EmptyOutputSet,
    ModeRequiresFullLeaks,
    VariableMismatch,
    NoInputReachesOutput,
    CapExceeded,
    HypothesesNotMet,
    PreconditionViolated,
    KeepNotSubsetOfLeak,
    AlreadyLeak,
    AnchorMissing,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to a stable machine-readable identifier.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace identkit
