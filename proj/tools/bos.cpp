#include <iostream>
#include <string>
#include <vector>

#include "bos/cli.hpp"

int main(int argc, char** argv) {
  return bos::cli::run(std::vector<std::string>(argv, argv + argc), std::cerr);
}
