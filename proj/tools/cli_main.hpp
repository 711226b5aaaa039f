#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dlab::cli {

// Exit codes: 0 success, 2 usage, 3 I/O, 4 numerical validation failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitValidation = 4;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dlab::cli
