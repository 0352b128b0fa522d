#include "tforge/cli.hpp"

#include <cstdio>

namespace tforge {

int cliMain(const std::vector<std::string>& args) {
  (void)args;
  std::fprintf(stderr, "no subcommands wired up yet\n");
  return 2;
}

}  // namespace tforge
