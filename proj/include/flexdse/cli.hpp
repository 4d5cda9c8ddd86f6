#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace flexdse {

/// Exit statuses of the command-line front end.
enum ExitStatus : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2 };

/// Entry point shared by the `flexdse` executable and the tests. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flexdse
