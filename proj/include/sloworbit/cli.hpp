#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sloworbit {

/// Exit codes: 0 ok, 1 verification failure, 2 usage or config error, 3 construction failure.
enum ExitCode : int { kExitOk = 0, kExitVerification = 1, kExitUsage = 2, kExitConstruction = 3 };

/// Runs one CLI invocation; args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, char** argv);

}  // namespace sloworbit
