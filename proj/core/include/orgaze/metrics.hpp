#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orgaze/annotations.hpp"
#include "orgaze/interval.hpp"
#include "orgaze/segmentation.hpp"
#include "orgaze/statistics.hpp"

namespace orgaze {

inline constexpr double kFrequencyWindowSeconds = 300.0;

/// How the per-5-minute frequency is normalized.
enum class FrequencyMode {
  /// Events in the phase scaled to a 300 s denominator.
  kPhaseNormalized,
  /// Mean over consecutive 300 s windows from the phase start (the last
  /// window may be shorter and is normalized by its own length); an event
  /// counts in the window holding its clipped onset.
  kWindowed,
};

/// Visual-attention summary of one event source over one phase.
struct VAMetrics {
  Interval phase;
  std::size_t n_events = 0;
  double frequency_per_5min = 0.0;
  std::optional<double> mean_duration_s;
  std::optional<double> sd_duration_s;
  double total_time_s = 0.0;
  double total_time_pct = 0.0;  // in [0, 100]
};

/// Events are clipped to the phase first; events without overlap are
/// ignored. Throws EmptyPhase for a phase of zero (or negative) length.
VAMetrics va_summary(std::span<const Interval> events, const Interval& phase,
                     FrequencyMode mode = FrequencyMode::kPhaseNormalized);
VAMetrics va_summary(std::span<const GazeEvent> events, const Interval& phase,
                     FrequencyMode mode = FrequencyMode::kPhaseNormalized);

std::vector<Interval> intervals_of(std::span<const GazeEvent> events);

struct OverlapRow {
  std::string behavior;
  std::size_t n_intervals = 0;
  double task_time_s = 0.0;   // measure of the union of the behavior's intervals
  double overlap_s = 0.0;     // measure of that union intersected with the events
  double overlap_pct = 0.0;
};

/// Share of each behavior's task time covered by gaze events, one row per
/// behavior in lexicographic order. Throws ZeroTaskTime when a behavior's
/// intervals have no measure.
std::vector<OverlapRow> task_overlap(std::span<const Interval> events,
                                     std::span<const TaskInterval> tasks);
std::vector<OverlapRow> task_overlap(std::span<const GazeEvent> events,
                                     std::span<const TaskInterval> tasks);

}  // namespace orgaze
