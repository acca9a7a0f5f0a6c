#include "flatstrata/cli.hpp"

int main(int argc, char** argv) {
  return flatstrata::cli_main(argc, argv, std::cout, std::cerr);
}
