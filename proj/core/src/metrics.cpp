#include "orgaze/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "orgaze/descriptive.hpp"
#include "orgaze/error.hpp"

namespace orgaze {

namespace {

double windowed_frequency(std::span<const Interval> clipped, const Interval& phase) {
  const double length = phase.duration();
  const auto n_windows = static_cast<std::size_t>(std::ceil(length / kFrequencyWindowSeconds));
  std::vector<std::size_t> counts(n_windows, 0);
  for (const auto& iv : clipped) {
    auto w = static_cast<std::size_t>((iv.start - phase.start) / kFrequencyWindowSeconds);
    ++counts[std::min(w, n_windows - 1)];
  }
  double sum = 0.0;
  for (std::size_t w = 0; w < n_windows; ++w) {
    const double lo = static_cast<double>(w) * kFrequencyWindowSeconds;
    const double span = std::min(kFrequencyWindowSeconds, length - lo);
    sum += static_cast<double>(counts[w]) * kFrequencyWindowSeconds / span;
  }
  return sum / static_cast<double>(n_windows);
}

}  // namespace

VAMetrics va_summary(std::span<const Interval> events, const Interval& phase,
                     FrequencyMode mode) {
  if (!(phase.end > phase.start)) {
    throw Error(ErrorCode::kEmptyPhase, "analysis phase has no duration");
  }
  std::vector<Interval> clipped;
  std::vector<double> durations;
  for (const auto& e : events) {
    if (auto c = clip(e, phase)) {
      clipped.push_back(*c);
      durations.push_back(c->duration());
    }
  }

  VAMetrics m;
  m.phase = phase;
  m.n_events = clipped.size();
  const double length = phase.duration();
  m.frequency_per_5min = mode == FrequencyMode::kPhaseNormalized
                             ? static_cast<double>(m.n_events) * kFrequencyWindowSeconds / length
                             : (clipped.empty() ? 0.0 : windowed_frequency(clipped, phase));
  m.mean_duration_s = mean_of(durations);
  m.sd_duration_s = sample_sd(durations);
  const auto covered = interval_union(clipped);
  m.total_time_s = measure(covered);
  m.total_time_pct = std::min(100.0, 100.0 * m.total_time_s / length);
  return m;
}

VAMetrics va_summary(std::span<const GazeEvent> events, const Interval& phase,
                     FrequencyMode mode) {
  const auto spans = intervals_of(events);
  return va_summary(std::span<const Interval>(spans), phase, mode);
}

std::vector<Interval> intervals_of(std::span<const GazeEvent> events) {
  std::vector<Interval> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(e.interval);
  return out;
}

std::vector<OverlapRow> task_overlap(std::span<const Interval> events,
                                     std::span<const TaskInterval> tasks) {
  std::map<std::string, std::vector<Interval>> by_behavior;
  for (const auto& t : tasks) by_behavior[t.behavior].push_back(t.interval);

  const auto gaze = interval_union(events);
  std::vector<OverlapRow> rows;
  for (const auto& [behavior, spans] : by_behavior) {
    const auto task_union = interval_union(spans);
    OverlapRow row;
    row.behavior = behavior;
    row.n_intervals = spans.size();
    row.task_time_s = measure(task_union);
    if (!(row.task_time_s > 0.0)) {
      throw Error(ErrorCode::kZeroTaskTime, "behavior '" + behavior + "' has no task time");
    }
    row.overlap_s = intersection_measure(gaze, task_union);
    row.overlap_pct = std::min(100.0, 100.0 * row.overlap_s / row.task_time_s);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<OverlapRow> task_overlap(std::span<const GazeEvent> events,
                                     std::span<const TaskInterval> tasks) {
  const auto spans = intervals_of(events);
  return task_overlap(std::span<const Interval>(spans), tasks);
}

}  // namespace orgaze
