#include <iostream>

#include "qric/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qric::run_cli(args, std::cout, std::cerr);
}
