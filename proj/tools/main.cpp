#include <string>
#include <vector>

#include "fermispec/cli.hpp"

int main(int argc, char** argv) {
  return fermispec::run(std::vector<std::string>(argv + 1, argv + argc));
}
