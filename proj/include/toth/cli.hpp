#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toth::cli {

enum ExitCode : int {
    kOk = 0,
    kRuntimeFailure = 1,
    kConfigError = 2,
    kNoValidGraph = 3,
};

/// Entry point behind the `toth` binary. `args` excludes the program name.
/// Results go to `out`; logs and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace toth::cli
