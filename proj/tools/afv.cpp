#include <iostream>
#include <string>
#include <vector>

#include "afv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return afv::cli::run(args, std::cout, std::cerr);
}
