#include <iostream>

#include "bbpe/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return bbpe::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
