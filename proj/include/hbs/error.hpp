#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace hbs {

using Complex = std::complex<double>;

enum class ErrorCode {
  EmptyMask,
  MultipleComponents,
  HoleDetected,
  TooFewPoints,
  DegenerateArea,
  PoleHit,
  ResolutionTooSmall,
  DegenerateFace,
  VanishingDerivative,
  NonAdmissible,
  SelfIntersection,
  DuplicatePoints,
  BranchAmbiguity,
  DomainViolation,
  NoConvergence,
  InfinityUnresolvable,
  MonotonicityViolation,
  AmbiguousNormalization,
  GridMismatch,
  NotNormalized,
  SingularSystem,
  NonConvergence,
  WeldingMismatch,
  MixedKinds,
  DegenerateSpectrum,
  KTooLarge,
  LengthMismatch,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code);

/// Error raised by every pipeline stage. `stage()` names the step that failed
/// (e.g. "zipper/interior") so batch drivers can report it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string stage = {})
      : std::runtime_error(message), code_(code), stage_(std::move(stage)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }

  /// Copy of this error with a stage tag prepended.
  Error tagged(const std::string& stage) const {
    return Error(code_, what(), stage_.empty() ? stage : stage + "/" + stage_);
  }

 private:
  ErrorCode code_;
  std::string stage_;
};

}  // namespace hbs
