#include <iostream>
#include <string>
#include <vector>

#include "modent/cli/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return modent::cli::main_entry(args, std::cout, std::cerr);
}
