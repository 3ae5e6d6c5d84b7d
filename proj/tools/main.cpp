#include <iostream>
#include <string>
#include <vector>

#include "finger_statics/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return finger_statics::run_cli(args, std::cout, std::cerr);
}
