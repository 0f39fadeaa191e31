#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iemb::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kInternal = 4 };

/// Runs one subcommand. `args` excludes the program name. Normal output goes
/// to `out`, diagnostics and warnings to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iemb::cli
