#include "orgaze/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "orgaze/descriptive.hpp"
#include "orgaze/error.hpp"

namespace orgaze {

namespace {

struct Run {
  std::size_t first;  // sample indices, inclusive
  std::size_t last;
  Interval interval;
};

}  // namespace

void SegConfig::validate() const {
  if (!std::isfinite(max_gap) || max_gap < 0.0) {
    throw Error(ErrorCode::kInvalidConfig, "max_gap must be finite and >= 0");
  }
  if (!std::isfinite(min_duration) || min_duration < 0.0) {
    throw Error(ErrorCode::kInvalidConfig, "min_duration must be finite and >= 0");
  }
}

std::vector<GazeEvent> segment(const BinarySeries& series, const SegConfig& config) {
  config.validate();
  const auto& s = series.samples;
  const double period = 1.0 / series.fps_nominal;

  std::vector<Run> runs;
  for (std::size_t i = 0; i < s.size();) {
    if (!s[i].value) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < s.size() && s[j + 1].value) ++j;
    double end = s[j].timestamp + period;
    if (j + 1 < s.size()) end = std::min(end, s[j + 1].timestamp);
    runs.push_back({i, j, {s[i].timestamp, end}});
    i = j + 1;
  }

  std::vector<Run> merged;
  for (const auto& run : runs) {
    if (!merged.empty() && run.interval.start - merged.back().interval.end <= config.max_gap) {
      merged.back().last = run.last;
      merged.back().interval.end = run.interval.end;
    } else {
      merged.push_back(run);
    }
  }

  std::vector<GazeEvent> events;
  for (const auto& run : merged) {
    if (run.interval.end - run.interval.start < config.min_duration) continue;
    GazeEvent e{run.interval, 0, std::nullopt};
    double sum = 0.0;
    std::size_t with_conf = 0;
    for (std::size_t k = run.first; k <= run.last; ++k) {
      if (!s[k].value) continue;
      ++e.n_frames;
      if (s[k].confidence) {
        sum += *s[k].confidence;
        ++with_conf;
      }
    }
    if (with_conf > 0) e.mean_confidence = sum / static_cast<double>(with_conf);
    events.push_back(e);
  }
  return events;
}

SeriesStats series_stats(std::span<const GazeEvent> events) {
  std::vector<double> durations;
  durations.reserve(events.size());
  for (const auto& e : events) durations.push_back(e.duration());

  SeriesStats out;
  out.count = events.size();
  out.mean_duration = mean_of(durations);
  out.sd_duration = sample_sd(durations);
  for (const double d : durations) out.total_duration += d;
  return out;
}

BinarySeries rasterize(std::span<const GazeEvent> events, std::span<const double> timestamps,
                       double fps_nominal) {
  BinarySeries out;
  out.fps_nominal = fps_nominal;
  out.samples.reserve(timestamps.size());
  std::size_t k = 0;
  for (const double t : timestamps) {
    while (k < events.size() && events[k].interval.end <= t) ++k;
    const bool inside = k < events.size() && events[k].interval.contains(t);
    out.samples.push_back({t, inside, std::nullopt});
  }
  return out;
}

}  // namespace orgaze
