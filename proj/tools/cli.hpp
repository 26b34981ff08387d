#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fastmmd::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;      ///< bad flags, bad input files, incompatible options
inline constexpr int kNumericalError = 3;  ///< a numerical contract was violated during the run

/// Runs the command line `args` (without the program name).  Results go to
/// `out` unless `--output` names a file; failures are reported on `err` as a
/// single JSON line `{"error": ...}`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fastmmd::cli
