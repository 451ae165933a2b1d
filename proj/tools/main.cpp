#include <string>
#include <vector>

#include "bankdyn/cli.hpp"

int main(int argc, char** argv) {
  return bankdyn::cli_dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
