#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flexsky::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kEmptyRegion = 3 };

/// Entry point behind the `flexsky` executable: `gen`, `query` and `bench`
/// subcommands. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flexsky::cli
