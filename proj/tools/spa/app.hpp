#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spa::cli {

enum ExitCode : int
{
  exit_ok = 0,
  exit_failure = 1,
  exit_usage = 2,
  exit_numerical = 3,
  exit_io = 4,
};

/// Runs `spa <args...>` (program name excluded). Never throws.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace spa::cli
