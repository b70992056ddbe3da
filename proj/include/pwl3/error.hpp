#pragma once

#include <stdexcept>
#include <string>

namespace pwl3 {

/// Error categories surfaced by the library. The numeric values are part of
/// the C ABI (see pwl3.h) and must not be reordered.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kDegenerateZone = 2,
  kNonFocusZone = 3,
  kNoCrossing = 4,
  kBracketFailure = 5,
  kDomainError = 6,
  kConvergenceError = 7,
  kUnsupportedZoneType = 8,
  kUnsupportedRegime = 9,
  kMissingLandmark = 10,
  kNoBracket = 11,
  kInconclusive = 12,
  kInvalidFamily = 13,
  kStepUnderflow = 14,
  kTangential = 15,
  kInternal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pwl3
