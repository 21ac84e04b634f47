#ifndef TRG_CLI_HPP
#define TRG_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace trg {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitBelowThreshold = 3,
  kExitUsage = 64,
  kExitData = 65,
  kExitNoInput = 66,
  kExitIo = 74,
};

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit code. Normal output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trg

#endif  // TRG_CLI_HPP
