#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mvsc {

/// Entry point of the command-line tool. `args` excludes the program name.
/// Returns 0 only when every requested output was written.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvsc
