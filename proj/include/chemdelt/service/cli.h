#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chemdelt::service {

/// Exit codes: 0 success, 1 validation failure, 2 usage or I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

/// Operator CLI. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chemdelt::service
