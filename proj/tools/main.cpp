#include <iostream>

#include "sptkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sptkit::run_cli(args, std::cout, std::cerr);
}
