#include "zoll/error.hpp"

namespace zoll {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonUnitVector: return "NonUnitVector";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::LeftChartDomain: return "LeftChartDomain";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::AmbiguousMultiplicity: return "AmbiguousMultiplicity";
    case ErrorCode::DegenerateZero: return "DegenerateZero";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::SingularSigma: return "SingularSigma";
    case ErrorCode::ContinuationBreakdown: return "ContinuationBreakdown";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::PoorConvergence: return "PoorConvergence";
    case ErrorCode::InconsistentChase: return "InconsistentChase";
    case ErrorCode::NotInvolution: return "NotInvolution";
    case ErrorCode::InconsistentSignature: return "InconsistentSignature";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace zoll
