#include <iostream>

#include "qlve/cli.hpp"

int main(int argc, char** argv) {
  return qlve::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
