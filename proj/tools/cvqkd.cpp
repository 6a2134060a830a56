#include "cvqkd/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return cvqkd::cli::run(argc, argv, std::cout, std::cerr);
}
