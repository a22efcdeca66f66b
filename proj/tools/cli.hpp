#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cycledeg::cli {

// Exit codes are part of the interface.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kPredicateFalse = 2,
    kCapacity = 3,
};

// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cycledeg::cli
