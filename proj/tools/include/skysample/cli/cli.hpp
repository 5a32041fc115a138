#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skysample::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitDataIntegrity = 4,
};

/// Runs one command line (without the program name). Regular output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skysample::cli
