#include <iostream>
#include <string>
#include <vector>

#include "rebound/cli.hpp"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rebound::run_cli(args, std::cout, std::cerr);
}
