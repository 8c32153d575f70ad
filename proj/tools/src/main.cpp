#include <iostream>
#include <string>
#include <vector>

#include "beamspec_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return beamspec::cli::run(args, std::cout, std::cerr);
}
