#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orbitforge {

enum class ErrorCode {
  Divergence,
  DegenerateCurvature,
  DegenerateTorsion,
  NonOrthogonal,
  NoExtremum,
  TangentialCrossing,
  NoCrossings,
  NotPeriodicRepetition,
  NoReturn,
  NoConvergence,
  LabelMismatch,
  SeedUnavailable,
  DivisionByZeroInterval,
  EnclosureBlowup,
  CrossingNotIsolated,
  SingularM,
  InvalidArgument,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Failures the CLI reports as "numerical" (exit code 3) rather than as
// configuration or I/O problems.
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace orbitforge
