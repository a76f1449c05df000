#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "coevo/cli.hpp"

int main(int argc, char** argv) {
  const char* no_color = std::getenv("NO_COLOR");
  const bool color = isatty(STDOUT_FILENO) && (no_color == nullptr || *no_color == '\0');
  return coevo::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr, color);
}
