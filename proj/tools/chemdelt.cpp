#include <iostream>
#include <string>
#include <vector>

#include "chemdelt/service/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chemdelt::service::run_cli(args, std::cout, std::cerr);
}
