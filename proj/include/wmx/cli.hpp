#pragma once

#include <string>
#include <vector>

namespace wmx {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name. Usage errors (bad flags, unknown method,
// suite or code names) return kExitUsage, anything else that fails returns
// kExitRuntime; diagnostics go to stderr.
int run_cli(const std::vector<std::string>& args);

}  // namespace wmx
