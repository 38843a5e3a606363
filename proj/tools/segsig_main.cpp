#include <iostream>
#include <string>
#include <vector>

#include "segsig/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return segsig::cli::dispatch(args, std::cout, std::cerr);
}
