#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bdim::cli {

enum ExitCode : int { ok = 0, domain_failure = 1, parse_failure = 2, no_convergence = 3 };

/// Entry point of the command-line tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bdim::cli
