#pragma once

#include <string>
#include <vector>

namespace flowcast {

// Full command-line entry point (argv without the program name). Returns
// the process exit code: 0 ok, 2 config, 3 io, 4 data validation,
// 5 numeric failure. Errors print one "error: ..." line on stderr.
int run_cli(const std::vector<std::string>& args);

} // namespace flowcast
