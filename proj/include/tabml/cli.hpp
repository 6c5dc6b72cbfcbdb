#pragma once

#include <string>
#include <vector>

#include "tabml/arff.hpp"

namespace tabml {

// Full command-line entry point. Exit codes: 0 success, 1 usage error,
// 2 data/schema/config error, 3 internal error.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args exclude argv[0]

// Per-attribute statistics block shown by `inspect`.
std::string inspect_text(const Dataset& d);

}  // namespace tabml
