#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "orgaze/interval.hpp"

namespace orgaze {

struct Sample {
  double timestamp = 0.0;
  bool value = false;
  /// Confidence of the winning face when the frame is onfocus.
  std::optional<double> confidence;

  bool operator==(const Sample&) const = default;
};

/// Per-frame onfocus verdicts. Timestamps strictly increasing.
struct BinarySeries {
  std::vector<Sample> samples;
  double fps_nominal = 25.0;

  bool operator==(const BinarySeries&) const = default;
};

struct SegConfig {
  double max_gap = 0.25;       // seconds; runs this close are merged
  double min_duration = 0.30;  // seconds; shorter merged events are dropped

  /// Throws InvalidConfig unless both values are finite and non-negative.
  void validate() const;
};

struct GazeEvent {
  Interval interval;
  std::size_t n_frames = 0;  // onfocus samples inside the event
  std::optional<double> mean_confidence;

  double duration() const noexcept { return interval.duration(); }
  bool operator==(const GazeEvent&) const = default;
};

/// Turns a binary series into gaze events:
///  1. each maximal run of true samples spans [first true t, last true t +
///     1/fps), with the end clipped to the next sample's timestamp;
///  2. runs separated by a gap <= max_gap are merged;
///  3. merged events shorter than min_duration are dropped.
/// Output is sorted and pairwise disjoint.
std::vector<GazeEvent> segment(const BinarySeries& series, const SegConfig& config);

struct SeriesStats {
  std::size_t count = 0;
  std::optional<double> mean_duration;  // empty for no events
  std::optional<double> sd_duration;    // sample SD; empty below two events
  double total_duration = 0.0;
};

SeriesStats series_stats(std::span<const GazeEvent> events);

/// Marks each timestamp true when it falls inside one of `events`.
BinarySeries rasterize(std::span<const GazeEvent> events, std::span<const double> timestamps,
                       double fps_nominal);

}  // namespace orgaze
