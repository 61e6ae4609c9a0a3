#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace orgaze {

/// Every failure the library reports. The CLI maps each code onto an exit
/// status (see tools/orgaze/cli.cpp).
enum class ErrorCode {
  // frame logs
  kMalformedRecord,
  kNonMonotonicTimestamp,
  kMissingMetadata,
  kEmptyLog,
  // annotation logs and state pairing
  kMalformedRow,
  kUnknownKind,
  kUnmatchedStart,
  kUnmatchedStop,
  kNestedState,
  // metrics
  kEmptyPhase,
  kZeroTaskTime,
  kLengthMismatch,
  kTooFewPairs,
  // evaluation
  kEmptyInput,
  kTooSmall,
  kTooFewItems,
  kDuplicateFrameRef,
  // synthetic sessions
  kInfeasibleConfig,
  // configuration values out of their documented domain
  kInvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  /// `location` is a 1-based line number for parsers and a 0-based event
  /// index for pairing errors.
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> location = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> location() const noexcept { return location_; }
  /// The message without the code and location prefix of what().
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> location_;
  std::string detail_;
};

}  // namespace orgaze
