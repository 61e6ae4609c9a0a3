#include "orgaze/interval.hpp"

#include <algorithm>

namespace orgaze {

std::optional<Interval> clip(const Interval& iv, const Interval& window) {
  const double lo = std::max(iv.start, window.start);
  const double hi = std::min(iv.end, window.end);
  if (!(hi > lo)) return std::nullopt;
  return Interval{lo, hi};
}

std::vector<Interval> interval_union(std::span<const Interval> intervals) {
  std::vector<Interval> sorted;
  sorted.reserve(intervals.size());
  for (const auto& iv : intervals) {
    if (iv.end > iv.start) sorted.push_back(iv);
  }
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) {
    return a.start < b.start || (a.start == b.start && a.end < b.end);
  });

  std::vector<Interval> out;
  for (const auto& iv : sorted) {
    if (!out.empty() && iv.start <= out.back().end) {
      out.back().end = std::max(out.back().end, iv.end);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

double measure(std::span<const Interval> disjoint) {
  double total = 0.0;
  for (const auto& iv : disjoint) total += iv.duration();
  return total;
}

double intersection_measure(std::span<const Interval> a,
                            std::span<const Interval> b) {
  double total = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].start, b[j].start);
    const double hi = std::min(a[i].end, b[j].end);
    if (hi > lo) total += hi - lo;
    if (a[i].end < b[j].end) {
      ++i;
    } else {
      ++j;
    }
  }
  return total;
}

}  // namespace orgaze
