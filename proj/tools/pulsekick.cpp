#include <iostream>

#include "pulsekick/cli.hpp"

int main(int argc, char** argv) {
  return pulsekick::cli::run(argc, argv, std::cout, std::cerr);
}
