#include <iostream>
#include <string>
#include <vector>

#include "hahnforge/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return hahnforge::run_command(args, std::cin, std::cout, std::cerr);
}
