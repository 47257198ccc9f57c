#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace structsel::cli {

/// Process exit codes; part of the command-line contract.
enum ExitCode : int {
  kOk = 0,
  kInfeasible = 2,
  kRefused = 3,
  kInputError = 4,
};

/// Runs the command line `args` (without the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

}  // namespace structsel::cli
