#include <iostream>

#include "qbdst/cli.hpp"

int main(int argc, char** argv) {
  return qbdst::cli::run(argc, argv, std::cout, std::cerr);
}
