#include <iostream>

#include "hgame/cli.hpp"

int main(int argc, char** argv) {
  return hgame::run_command(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
