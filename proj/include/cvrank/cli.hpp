#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cvrank {

/// Entry point of the `cvrank` tool. Exit status: 0 ok, 1 usage, 2 data, 3 io.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvrank
