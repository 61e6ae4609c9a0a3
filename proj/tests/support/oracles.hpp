// Independent reference computations used only by the test suites. Nothing
// here calls into the code paths it is used to check.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "orgaze/annotations.hpp"
#include "orgaze/frame_log.hpp"
#include "orgaze/segmentation.hpp"

namespace orgaze::testing {

/// Single-pass state machine over the samples: open an event on a true
/// sample, extend it while the run continues or the gap since its end is
/// small enough, emit it on close when long enough.
inline std::vector<GazeEvent> brute_force_segment(const BinarySeries& series, double max_gap,
                                                  double min_duration) {
  const auto& s = series.samples;
  const double period = 1.0 / series.fps_nominal;
  std::vector<GazeEvent> out;
  bool open = false;
  bool prev_true = false;
  double start = 0.0, end = 0.0, sum = 0.0;
  std::size_t n = 0, with_conf = 0;

  auto close = [&] {
    if (end - start >= min_duration) {
      GazeEvent e{{start, end}, n, std::nullopt};
      if (with_conf > 0) e.mean_confidence = sum / static_cast<double>(with_conf);
      out.push_back(e);
    }
  };
  auto reset = [&](double t) {
    start = t;
    n = 0;
    sum = 0.0;
    with_conf = 0;
  };

  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i].value) {
      prev_true = false;
      continue;
    }
    const double t = s[i].timestamp;
    if (!open) {
      open = true;
      reset(t);
    } else if (!prev_true && t - end > max_gap) {
      close();
      reset(t);
    }
    double run_end = t + period;
    if (i + 1 < s.size()) run_end = std::min(run_end, s[i + 1].timestamp);
    end = run_end;
    ++n;
    if (s[i].confidence) {
      sum += *s[i].confidence;
      ++with_conf;
    }
    prev_true = true;
  }
  if (open) close();
  return out;
}

inline bool covered(const std::vector<Interval>& spans, double t) {
  for (const auto& iv : spans) {
    if (t >= iv.start && t < iv.end) return true;
  }
  return false;
}

/// Overlap percentage on a 1 ms grid (cell midpoints) for one behavior.
inline double rasterized_overlap_pct(const std::vector<Interval>& events,
                                     const std::vector<Interval>& tasks) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& t : tasks) {
    lo = std::min(lo, t.start);
    hi = std::max(hi, t.end);
  }
  const auto cells = static_cast<std::int64_t>(std::ceil((hi - lo) / 1e-3));
  std::int64_t in_task = 0, in_both = 0;
  for (std::int64_t k = 0; k < cells; ++k) {
    const double t = lo + (static_cast<double>(k) + 0.5) * 1e-3;
    if (!covered(tasks, t)) continue;
    ++in_task;
    if (covered(events, t)) ++in_both;
  }
  return 100.0 * static_cast<double>(in_both) / static_cast<double>(in_task);
}

/// Two-sided Student-t p-value for integer degrees of freedom from the
/// closed-form finite series of the t CDF (odd/even nu cases).
inline double closed_form_t_p(double t, int nu) {
  const double theta = std::atan(std::abs(t) / std::sqrt(static_cast<double>(nu)));
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  double inside = 0.0;  // P(|T| <= |t|)
  if (nu % 2 == 1) {
    double series = 0.0;
    if (nu > 1) {
      double term = c;
      series = term;
      for (int k = 3; k <= nu - 2; k += 2) {
        term *= static_cast<double>(k - 1) / static_cast<double>(k) * c * c;
        series += term;
      }
    }
    inside = 2.0 / std::numbers::pi * (theta + s * series);
  } else {
    double term = 1.0;
    double series = 1.0;
    for (int k = 2; k <= nu - 2; k += 2) {
      term *= static_cast<double>(k - 1) / static_cast<double>(k) * c * c;
      series += term;
    }
    inside = s * series;
  }
  return std::clamp(1.0 - inside, 0.0, 1.0);
}

/// Paired t-test written directly from the textbook definition.
inline double reference_paired_t_p(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  double mean = 0.0;
  for (const double x : d) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const double x : d) ss += (x - mean) * (x - mean);
  const double se = std::sqrt(ss / (static_cast<double>(n) * static_cast<double>(n - 1)));
  return closed_form_t_p(mean / se, static_cast<int>(n - 1));
}

/// Exact two-sided signed-rank p by enumerating every sign assignment.
inline double enumerated_wilcoxon_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> mag;
  std::vector<bool> pos;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d == 0.0) continue;
    mag.push_back(std::abs(d));
    pos.push_back(d > 0.0);
  }
  const std::size_t m = mag.size();
  if (m == 0) return 1.0;
  // doubled average rank = 2 * (#smaller) + (#equal, self included) + 1
  std::vector<std::int64_t> rank(m);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::int64_t less = 0, equal = 0;
    for (std::size_t j = 0; j < m; ++j) {
      less += mag[j] < mag[i];
      equal += mag[j] == mag[i];
    }
    rank[i] = 2 * less + equal + 1;
    total += rank[i];
  }
  std::int64_t observed = 0;
  for (std::size_t i = 0; i < m; ++i) observed += pos[i] ? rank[i] : 0;
  const std::int64_t obs_dist = std::abs(2 * observed - total);

  std::uint64_t extreme = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::int64_t w = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1U) w += rank[i];
    }
    if (std::abs(2 * w - total) >= obs_dist) ++extreme;
  }
  return std::ldexp(static_cast<double>(extreme), -static_cast<int>(m));
}

/// Random binary series with bursty structure, strictly increasing stamps.
inline BinarySeries random_series(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double fps = std::array<double, 4>{10.0, 25.0, 30.0, 50.0}[rng() % 4];
  BinarySeries s;
  s.fps_nominal = fps;
  const std::size_t n = len(rng);
  const double p_switch = 0.02 + 0.3 * u(rng);
  const bool jittered = rng() % 2 == 0;
  bool state = u(rng) < 0.5;
  double t = u(rng) * 5.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (u(rng) < p_switch) state = !state;
    std::optional<double> conf;
    if (state && u(rng) < 0.9) conf = u(rng);
    s.samples.push_back({t, state, conf});
    double step = 1.0 / fps;
    if (jittered) step *= 0.5 + u(rng);       // irregular sampling
    if (u(rng) < 0.01) step += u(rng) * 0.5;  // occasional dropout
    t += step;
  }
  return s;
}

inline std::vector<double> timestamps_of(const BinarySeries& s) {
  std::vector<double> t;
  for (const auto& x : s.samples) t.push_back(x.timestamp);
  return t;
}

}  // namespace orgaze::testing
