#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace apc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand. `args` excludes the program name. Errors are reported
// on `err` as a single JSON line {"error": {"code": ..., "message": ...}}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace apc::cli
