#include <iostream>
#include <string>
#include <vector>

#include "curvedcc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return curvedcc::cli::run(args, std::cout, std::cerr);
}
