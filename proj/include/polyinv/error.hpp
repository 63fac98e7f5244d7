#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyinv {

enum class ErrorKind {
  Parse,                  // syntactically malformed document
  InvalidInput,           // well-formed input violating an invariant
  Definiteness,           // leading coefficient not diagonal positive
  NonRealSpectrum,        // a proper value left the real axis
  NearDegenerate,         // two proper values closer than the separation tolerance
  DegenerateDenominator,  // v^T A'(lambda) v vanishes: value is numerically non-simple
  AmbiguousMatching,      // two value-to-target assignments tie
  SingularJacobian,
  NoConvergence,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace polyinv
