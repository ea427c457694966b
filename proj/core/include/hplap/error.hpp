#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hplap {

enum class Errc {
  InvalidBracket,
  StepUnderflow,
  MaxRefinementExceeded,
  DomainError,
  BuildError,
  NoRealRoots,
  EpsOutOfRange,
  HomogeneousCase,
  NotInExistenceRegion,
  NonpositivePotential,
  WindowTooShort,
  NotConverged,
  DeltaOutOfRange,
  ConvergenceFailure,
  ConfigError,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidBracket: return "InvalidBracket";
    case Errc::StepUnderflow: return "StepUnderflow";
    case Errc::MaxRefinementExceeded: return "MaxRefinementExceeded";
    case Errc::DomainError: return "DomainError";
    case Errc::BuildError: return "BuildError";
    case Errc::NoRealRoots: return "NoRealRoots";
    case Errc::EpsOutOfRange: return "EpsOutOfRange";
    case Errc::HomogeneousCase: return "HomogeneousCase";
    case Errc::NotInExistenceRegion: return "NotInExistenceRegion";
    case Errc::NonpositivePotential: return "NonpositivePotential";
    case Errc::WindowTooShort: return "WindowTooShort";
    case Errc::NotConverged: return "NotConverged";
    case Errc::DeltaOutOfRange: return "DeltaOutOfRange";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error kind.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hplap
