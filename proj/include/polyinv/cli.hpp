#pragma once

#include <iosfwd>

namespace polyinv::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kInvalidProblem = 3,
  kNoConvergence = 4,
  kNonRealSpectrum = 5,
  kVerificationFailed = 6,
};

/// Runs the command line `argv` (argv[0] is the program name) writing
/// reports and summaries to `out` and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polyinv::cli
