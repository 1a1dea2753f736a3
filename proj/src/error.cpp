#include "aggdiff/error.h"

namespace aggdiff {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::MassTooSmall: return "MassTooSmall";
    case ErrorCode::DegenerateQuantile: return "DegenerateQuantile";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::StepTooSmall: return "StepTooSmall";
    case ErrorCode::MassMismatch: return "MassMismatch";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::BadValue: return "BadValue";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<double> time)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      time_(time) {}

}  // namespace aggdiff
