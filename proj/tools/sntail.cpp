// SPDX-License-Identifier: Apache-2.0
#include <string>
#include <vector>

#include "sntail/cli/commands.hpp"

int main(int argc, char** argv) {
  return sntail::cli::main_entry(std::vector<std::string>(argv + 1, argv + argc));
}
