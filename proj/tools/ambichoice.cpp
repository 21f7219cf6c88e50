#include <iostream>

#include "ambichoice/cli.hpp"

int main(int argc, char** argv) {
  return ambichoice::cli::run(argc, argv, std::cout, std::cerr);
}
