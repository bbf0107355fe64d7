#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epicast::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRun = 2;

/// Runs the command line `args` (without the program name). Results go to
/// `out`, JSON log lines to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace epicast::cli
