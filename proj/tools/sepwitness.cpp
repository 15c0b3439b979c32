#include <iostream>

#include "sepwitness/cli.hpp"

int main(int argc, char** argv) {
  return sepwitness::cli::run_cli(argc, argv, std::cout, std::cerr);
}
