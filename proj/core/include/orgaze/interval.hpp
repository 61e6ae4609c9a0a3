#pragma once

#include <optional>
#include <span>
#include <vector>

namespace orgaze {

/// Half-open time span in seconds. `start <= end`.
struct Interval {
  double start = 0.0;
  double end = 0.0;

  double duration() const noexcept { return end - start; }
  bool contains(double t) const noexcept { return t >= start && t < end; }

  bool operator==(const Interval&) const = default;
};

/// Intersection of `iv` with `window`; empty when they share no positive
/// measure.
std::optional<Interval> clip(const Interval& iv, const Interval& window);

/// Sorted, pairwise-disjoint cover of the input. Touching intervals are
/// fused; zero-length intervals vanish.
std::vector<Interval> interval_union(std::span<const Interval> intervals);

/// Total length of a sorted disjoint list (as returned by interval_union).
double measure(std::span<const Interval> disjoint);

/// Length of `a ∩ b` for two sorted disjoint lists, by a linear sweep.
double intersection_measure(std::span<const Interval> a,
                            std::span<const Interval> b);

}  // namespace orgaze
