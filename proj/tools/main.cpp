#include <iostream>

#include "wqed/cli.hpp"

int main(int argc, char** argv) {
  return wqed::run_cli(argc, argv, std::cout, std::cerr);
}
