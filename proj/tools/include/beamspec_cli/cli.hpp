#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace beamspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitModuleError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `beamspec` tool; args[0] is the program name. Writes data to `out` (or the --output
/// file) and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace beamspec::cli
