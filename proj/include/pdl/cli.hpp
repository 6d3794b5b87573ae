#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdl::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericalError = 3;

/// Runs the command line (args excludes the program name). Results go to
/// out unless --output names a file; diagnostics and notes go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace pdl::cli
