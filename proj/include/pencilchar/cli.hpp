#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pc {

// Exit statuses of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_parse = 2,
  exit_invariant = 3,
  exit_math = 4,
  exit_conditional = 5,  // a conditional result was requested with --strict
};

// args excludes the program name. Reports go to out; failures print one line
// "error <code> <kind>: <message>" to err.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace pc
