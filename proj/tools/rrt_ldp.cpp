#include <iostream>
#include <string>
#include <vector>

#include "rrt/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  const std::vector<std::string> tokens(argv + 1, argv + argc);
  const int code = rrt::cli::run(tokens, std::cout, std::cerr);
  std::cout.flush();
  return code;
}
