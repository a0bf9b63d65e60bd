#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace p2e::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success, 1 usage or domain error, 2 I/O error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace p2e::cli
