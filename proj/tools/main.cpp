#include <iostream>
#include <string>
#include <vector>

#include "hg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hg::run_cli(args, std::cout, std::cerr);
}
