#include <iostream>

#include "multipoint/cli.hpp"

int main(int argc, char** argv) {
  return multipoint::run_cli(argc, argv, std::cout, std::cerr, multipoint::stdout_wants_color());
}
