#include <string>
#include <vector>

#include "tforge/cli.hpp"

int main(int argc, char** argv) {
  return tforge::cliMain(std::vector<std::string>(argv + 1, argv + argc));
}
