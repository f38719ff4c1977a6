#include "causal_lab/errors.hpp"

namespace clab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfWindow: return "OutOfWindow";
    case ErrorCode::InExcisedShadow: return "InExcisedShadow";
    case ErrorCode::ToleranceUnachievable: return "ToleranceUnachievable";
    case ErrorCode::NotAchronal: return "NotAchronal";
    case ErrorCode::PreconditionNesting: return "PreconditionNesting";
    case ErrorCode::NoRoom: return "NoRoom";
    case ErrorCode::ShadowOverlap: return "ShadowOverlap";
    case ErrorCode::TooDense: return "TooDense";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::NotAntichain: return "NotAntichain";
    case ErrorCode::NotMaximal: return "NotMaximal";
    case ErrorCode::PreconditionFailure: return "PreconditionFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::PreconditionShadow: return "PreconditionShadow";
    case ErrorCode::NoContainingDiamond: return "NoContainingDiamond";
    case ErrorCode::NoSuperset: return "NoSuperset";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace clab
