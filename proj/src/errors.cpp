#include "identkit/errors.hpp"

namespace identkit {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::EmptyInputSet: return "EmptyInputSet";
    case ErrorCode::EmptyOutputSet: return "EmptyOutputSet";
    case ErrorCode::ModeRequiresFullLeaks: return "ModeRequiresFullLeaks";
    case ErrorCode::VariableMismatch: return "VariableMismatch";
    case ErrorCode::NoInputReachesOutput: return "NoInputReachesOutput";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::HypothesesNotMet: return "HypothesesNotMet";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::KeepNotSubsetOfLeak: return "KeepNotSubsetOfLeak";
    case ErrorCode::AlreadyLeak: return "AlreadyLeak";
    case ErrorCode::AnchorMissing: return "AnchorMissing";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

} // namespace identkit
