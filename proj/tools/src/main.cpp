#include <iostream>

#include "ulsched_cli/cli.hpp"

int main(int argc, char** argv) {
  return ulsched::cli::run_cli(argc, argv, std::cout, std::cerr);
}
