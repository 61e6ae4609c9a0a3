#include "orgaze/error.hpp"

namespace orgaze {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kNonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case ErrorCode::kMissingMetadata: return "MissingMetadata";
    case ErrorCode::kEmptyLog: return "EmptyLog";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kUnknownKind: return "UnknownKind";
    case ErrorCode::kUnmatchedStart: return "UnmatchedStart";
    case ErrorCode::kUnmatchedStop: return "UnmatchedStop";
    case ErrorCode::kNestedState: return "NestedState";
    case ErrorCode::kEmptyPhase: return "EmptyPhase";
    case ErrorCode::kZeroTaskTime: return "ZeroTaskTime";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooFewPairs: return "TooFewPairs";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kTooFewItems: return "TooFewItems";
    case ErrorCode::kDuplicateFrameRef: return "DuplicateFrameRef";
    case ErrorCode::kInfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> location) {
  std::string out{to_string(code)};
  if (location) out += " at " + std::to_string(*location);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> location)
    : std::runtime_error(decorate(code, message, location)),
      code_(code),
      location_(location),
      detail_(message) {}

}  // namespace orgaze
