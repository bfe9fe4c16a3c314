#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace circuitkit::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kSolverLimit = 2,
  kInfeasible = 3,
};

// Runs one command line (without the program name) and returns its exit
// code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace circuitkit::cli
