#include <iostream>
#include <string>
#include <vector>

#include "chromoseg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    std::cerr << "usage: chromoseg <segment|simulate|bench|train-ref> [--config file] [--key value ...]\n";
    return args.empty() ? 1 : 0;
  }
  if (args[0] == "--version") {
    std::cout << "chromoseg " << chromoseg::kVersion << '\n';
    return 0;
  }
  return chromoseg::run_cli(args, std::cerr, std::cerr);
}
