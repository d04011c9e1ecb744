#include <iostream>
#include <string>
#include <vector>

#include "dbird/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dbird::cli::run(args, std::cout, std::cerr);
}
