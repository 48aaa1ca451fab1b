#include <iostream>

#include "sigmactl.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sigma::cli::run(args, std::cout, std::cerr);
}
