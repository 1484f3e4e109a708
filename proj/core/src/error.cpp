#include "orbitforge/error.hpp"

namespace orbitforge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Divergence: return "Divergence";
    case ErrorCode::DegenerateCurvature: return "DegenerateCurvature";
    case ErrorCode::DegenerateTorsion: return "DegenerateTorsion";
    case ErrorCode::NonOrthogonal: return "NonOrthogonal";
    case ErrorCode::NoExtremum: return "NoExtremum";
    case ErrorCode::TangentialCrossing: return "TangentialCrossing";
    case ErrorCode::NoCrossings: return "NoCrossings";
    case ErrorCode::NotPeriodicRepetition: return "NotPeriodicRepetition";
    case ErrorCode::NoReturn: return "NoReturn";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::SeedUnavailable: return "SeedUnavailable";
    case ErrorCode::DivisionByZeroInterval: return "DivisionByZeroInterval";
    case ErrorCode::EnclosureBlowup: return "EnclosureBlowup";
    case ErrorCode::CrossingNotIsolated: return "CrossingNotIsolated";
    case ErrorCode::SingularM: return "SingularM";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::IoError:
    case ErrorCode::InvalidArgument:
      return false;
    default:
      return true;
  }
}

}  // namespace orbitforge
