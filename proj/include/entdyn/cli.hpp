#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entdyn::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kBadArguments = 2,
  kIoFailure = 3,
  kGammaTooSmall = 4,
  kVerificationFailed = 5,
  kRefinementCap = 6,
  kNumerical = 7,
};

/// Runs one command line (args excludes the program name). Data goes to
/// `out` unless a file flag redirects it; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entdyn::cli
