#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mvresp::cli {

enum exit_code : int {
  ok = 0,
  internal = 1,
  usage = 2,
  theorem_failure = 3,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mvresp::cli
