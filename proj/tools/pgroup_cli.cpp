#include <iostream>

#include "pgroup/cli.hpp"

int main(int argc, char** argv) {
  return pgroup::cli::run(argc, argv, std::cout, std::cerr);
}
