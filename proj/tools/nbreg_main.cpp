#include <iostream>

#include "nbreg/cli.hpp"

int main(int argc, char** argv) {
  return nbreg::run_cli(argc, argv, std::cout, std::cerr);
}
