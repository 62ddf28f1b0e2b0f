#include <iostream>

#include "glp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return glp::run_cli(args, std::cout, std::cerr);
}
