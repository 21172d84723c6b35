// Command-line front end: argument/config parsing and command dispatch.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace keysub::cli {

/// Runs one command (args exclude the program name).  Exit codes: 0 when the
/// asserted property holds, 1 when it fails, 2 on a configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace keysub::cli
