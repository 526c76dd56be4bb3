#include <iostream>
#include <string>
#include <vector>

#include "vope/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vope::run_cli(args, std::cout, std::cerr);
}
