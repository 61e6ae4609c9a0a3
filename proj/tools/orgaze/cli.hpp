#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "orgaze/error.hpp"

namespace orgaze::cli {

/// Process exit statuses.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,     // unexpected failure
  kParseError = 2,   // an input file is malformed
  kConfigError = 3,  // bad flags, missing inputs, unusable study design
  kAnalysisError = 4,
  kOutputError = 5,  // artifacts could not be written
};

/// Total mapping from library errors to exit statuses.
int exit_code_for(ErrorCode code) noexcept;

/// Environment variable naming a JSON file of default flag values.
inline constexpr const char* kConfigEnv = "ORGAZE_CONFIG";

/// Runs the tool; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orgaze::cli
