#include "hbs/error.hpp"

namespace hbs {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::MultipleComponents: return "MultipleComponents";
    case ErrorCode::HoleDetected: return "HoleDetected";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateArea: return "DegenerateArea";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::ResolutionTooSmall: return "ResolutionTooSmall";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::VanishingDerivative: return "VanishingDerivative";
    case ErrorCode::NonAdmissible: return "NonAdmissible";
    case ErrorCode::SelfIntersection: return "SelfIntersection";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InfinityUnresolvable: return "InfinityUnresolvable";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::AmbiguousNormalization: return "AmbiguousNormalization";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::WeldingMismatch: return "WeldingMismatch";
    case ErrorCode::MixedKinds: return "MixedKinds";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace hbs
