#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace holmes::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeError = 1, kUsageError = 2 };

// Runs one command line; args[0] is the program name. Machine-readable
// output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace holmes::cli
