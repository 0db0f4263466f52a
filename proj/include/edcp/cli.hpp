#pragma once

#include <string>
#include <vector>

namespace edcp {

// Command-line entry point (testable without a subprocess). Exit codes:
// 0 success, 2 parameter/usage validation failure, 1 runtime failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace edcp
