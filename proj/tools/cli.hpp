#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geophase::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one command line. `args` excludes the program name. Machine output
/// goes to `out` unless the command writes to --out; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geophase::cli
