#include "polyinv/error.hpp"

namespace polyinv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Definiteness: return "Definiteness";
    case ErrorKind::NonRealSpectrum: return "NonRealSpectrum";
    case ErrorKind::NearDegenerate: return "NearDegenerate";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::AmbiguousMatching: return "AmbiguousMatching";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

}  // namespace polyinv
