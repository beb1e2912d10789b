#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rotunsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `rotunsim` executable. `args` excludes the
/// program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rotunsim::cli
