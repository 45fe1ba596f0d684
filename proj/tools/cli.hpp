#pragma once

#include "lopc/io.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace lopc::cli {

enum ExitCode : int { kSuccess = 0, kError = 1, kNegative = 2 };

// Runs one command line (without the program name); reports go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Flattened "path: value" lines for the table renderer.
std::string render_table(const Json& report);

}  // namespace lopc::cli
