#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oamsim::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,    // invalid flags, unreadable or unparsable bench file
    kPhysics = 2,  // truncation or other physics error
    kVerify = 3,   // a requested assertion failed
};

inline constexpr int kSchemaVersion = 1;

/// Runs the command line `args` (program name excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oamsim::cli
