#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geoforest::cli {

inline constexpr const char* kToolName = "geodesic-forest";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geoforest::cli
