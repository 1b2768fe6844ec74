#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flowpotts::cli {

enum ExitCode { exit_ok = 0, exit_failed = 1, exit_usage = 2, exit_cap = 3 };

// Runs the flowpotts command line. args excludes the program name; env
// entries are "NAME=value" strings (normally the process environment).
int run(const std::vector<std::string>& args, const std::vector<std::string>& env, std::ostream& out,
        std::ostream& err);

}  // namespace flowpotts::cli
