#ifndef MAJOLAT_TOOLS_CLI_HPP
#define MAJOLAT_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace majolat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace majolat::cli

#endif  // MAJOLAT_TOOLS_CLI_HPP
