#include <iostream>
#include <string>
#include <vector>

#include "adhesion/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return adhesion::cli::run(args, std::cout, std::cerr);
}
