#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polymerlab {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitBudget = 2,
    kExitInvariant = 3,
};

std::string version_stamp();

/// Entry point of the command-line tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace polymerlab
