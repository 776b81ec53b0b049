#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trajeval/error.hpp"

namespace trajeval::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,  // bad flags, invalid values, unreadable files
  kExitParse = 3,  // malformed trajectory or report
  kExitNoOverlap = 4,
  kExitDegenerate = 5,  // alignment or estimation could not be solved
};

int exit_code_for(ErrorKind kind);

/// Runs the tool on `args` (without the program name). Requested data goes
/// to `out`; diagnostics and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trajeval::cli
