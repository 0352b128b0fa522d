#pragma once

#include <string>
#include <vector>

namespace tforge {

// Entry point shared by the command-line binary and in-process tests.
// Returns 0 on success, 1 when a check fails, 2 on invalid input.
int cliMain(const std::vector<std::string>& args);

}  // namespace tforge
