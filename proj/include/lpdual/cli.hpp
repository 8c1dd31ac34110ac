#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lpdual::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitContract = 2;
inline constexpr int kExitSolver = 3;

/// `args` excludes the program name. Results go to --out when given, else to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_hex(std::string_view data);

}  // namespace lpdual::cli
