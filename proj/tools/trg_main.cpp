#include <iostream>
#include <string>
#include <vector>

#include "trg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return trg::run_cli(args, std::cout, std::cerr);
}
