#include <iostream>

#include "vlmc/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vlmc::cli::run(args, std::cout, std::cerr);
}
