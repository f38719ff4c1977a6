#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clab {

enum class ErrorCode {
  InvalidArgument,
  // continuum models
  OutOfWindow,
  InExcisedShadow,
  ToleranceUnachievable,
  NotAchronal,
  PreconditionNesting,
  NoRoom,
  ShadowOverlap,
  // causal sets
  TooDense,
  CycleDetected,
  NotAntichain,
  NotMaximal,
  PreconditionFailure,
  // duality lab
  DimensionMismatch,
  PreconditionShadow,
  NoContainingDiamond,
  NoSuperset,
  // harness
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the scenario runner) can branch on the kind of failure.
class LabError : public std::runtime_error {
 public:
  LabError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw LabError(code, what);
}

}  // namespace clab
