#include <iostream>
#include <string>
#include <vector>

#include "blockopt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return blockopt::run_cli(args, std::cout, std::cerr);
}
