#include <iostream>

#include "ncfree/cli.hpp"

int main(int argc, char** argv) {
  int code = 0;
  const auto config = ncfree::cli::parse_args(argc, argv, std::cout, std::cerr, code);
  if (!config) return code;
  return ncfree::cli::run(*config, std::cout, std::cerr);
}
