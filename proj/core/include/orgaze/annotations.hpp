#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orgaze/interval.hpp"

namespace orgaze {

enum class EventKind { kPoint, kStart, kStop };

std::string_view to_string(EventKind kind) noexcept;

/// One row of a behavioral coding log.
struct AnnotationEvent {
  double time = 0.0;
  std::string subject;
  std::string behavior;
  std::optional<std::string> modifier;  // e.g. the monitor looked at
  EventKind kind = EventKind::kPoint;

  bool operator==(const AnnotationEvent&) const = default;
};

struct AnnotationLog {
  std::vector<AnnotationEvent> events;  // stable-sorted by time
  std::vector<std::string> warnings;
};

/// Reads `time,subject,behavior,modifier,kind` CSV. Columns are matched by
/// header name; extra columns are ignored with a warning. Kind matching is
/// case-insensitive (`point`, `start`, `stop`). An empty source is a valid
/// empty log. Throws MalformedRow or UnknownKind with the 1-based line.
AnnotationLog parse_annotations(std::istream& source);
AnnotationLog parse_annotations(std::string_view source);

void write_annotations(std::span<const AnnotationEvent> events, std::ostream& out);

struct TaskInterval {
  std::string behavior;
  std::string subject;
  Interval interval;
  std::optional<std::string> modifier;

  bool operator==(const TaskInterval&) const = default;
};

enum class PairingPolicy { kStrict, kTruncate };

/// Pairs start/stop events sharing (subject, behavior, modifier) into task
/// intervals; point events are skipped.
///
/// Under kTruncate a start that is never stopped closes at `session_end`, and
/// a stop that is the first event of its key opens at time 0 (recording
/// began mid-task). Under kStrict both raise UnmatchedStart / UnmatchedStop.
/// A second start while the key is open raises NestedState in both policies.
/// Results are clipped to [0, session_end]; zero-length pairs carry no
/// measure and are omitted. Error locations are 0-based event indices.
std::vector<TaskInterval> pair_state_events(
    std::span<const AnnotationEvent> events,
    double session_end = std::numeric_limits<double>::infinity(),
    PairingPolicy policy = PairingPolicy::kTruncate);

/// Intervals of one behavior, optionally restricted to one modifier.
std::vector<Interval> intervals_of(std::span<const TaskInterval> tasks,
                                   std::string_view behavior,
                                   std::optional<std::string_view> modifier = std::nullopt);

}  // namespace orgaze
