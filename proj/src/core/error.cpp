#include "pwl3/error.hpp"

namespace pwl3 {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegenerateZone: return "DegenerateZone";
    case ErrorCode::kNonFocusZone: return "NonFocusZone";
    case ErrorCode::kNoCrossing: return "NoCrossing";
    case ErrorCode::kBracketFailure: return "BracketFailure";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kConvergenceError: return "ConvergenceError";
    case ErrorCode::kUnsupportedZoneType: return "UnsupportedZoneType";
    case ErrorCode::kUnsupportedRegime: return "UnsupportedRegime";
    case ErrorCode::kMissingLandmark: return "MissingLandmark";
    case ErrorCode::kNoBracket: return "NoBracket";
    case ErrorCode::kInconclusive: return "Inconclusive";
    case ErrorCode::kInvalidFamily: return "InvalidFamily";
    case ErrorCode::kStepUnderflow: return "StepUnderflow";
    case ErrorCode::kTangential: return "Tangential";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace pwl3
