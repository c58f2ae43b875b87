#pragma once

#include <iosfwd>

namespace tb::tools {

enum exit_code : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitVerification = 3,
};

// Entry point of the tbroute command line tool.
int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tb::tools
