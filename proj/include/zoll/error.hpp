#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zoll {

enum class ErrorCode {
  NonUnitVector,
  NotTangent,
  LeftChartDomain,
  StepTooLarge,
  AmbiguousMultiplicity,
  DegenerateZero,
  OutOfRange,
  SingularSigma,
  ContinuationBreakdown,
  NotInvertible,
  NonFinite,
  PoorConvergence,
  InconsistentChase,
  NotInvolution,
  InconsistentSignature,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// All recoverable numerical and contract failures raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace zoll
