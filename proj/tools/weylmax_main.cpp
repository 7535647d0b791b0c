#include <iostream>
#include <string>
#include <vector>

#include "weylmax/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return weylmax::dispatch(args, std::cout, std::cerr);
}
