#include <iostream>

#include "popwave/cli/cli.hpp"

int main(int argc, char** argv) {
  return popwave::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
