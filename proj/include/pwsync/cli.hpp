#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pwsync {

/// Entry point of the `pwsync` command-line tool. `args` excludes the
/// program name. Returns the process exit status; diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pwsync
