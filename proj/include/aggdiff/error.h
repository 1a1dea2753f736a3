#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aggdiff {

enum class ErrorCode {
  BadParameter,
  MassTooSmall,
  DegenerateQuantile,
  OutOfRange,
  QuadratureFailure,
  InvalidState,
  StepTooSmall,
  MassMismatch,
  CFLViolation,
  NegativeDensity,
  DomainMismatch,
  ParseError,
  UnknownKey,
  BadValue,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. `time` is set for failures that happen during a
/// time integration (StepTooSmall, NegativeDensity).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<double> time = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> time() const noexcept { return time_; }

 private:
  ErrorCode code_;
  std::optional<double> time_;
};

}  // namespace aggdiff
