#include "orgaze/descriptive.hpp"
#include "orgaze/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "orgaze/error.hpp"

namespace orgaze {

std::optional<double> mean_of(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::optional<double> sample_sd(std::span<const double> values) {
  if (values.size() < 2) return std::nullopt;
  const double m = *mean_of(values);
  double ss = 0.0;
  for (const double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace orgaze

namespace orgaze {

std::string_view to_string(PairedTest test) noexcept {
  return test == PairedTest::kPairedT ? "paired_t" : "wilcoxon_signed_rank";
}

double students_t_two_sided_p(double t, double df) {
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return std::clamp(p, 0.0, 1.0);
}

SignedRanks signed_ranks(std::span<const double> differences) {
  struct Item {
    double magnitude;
    bool positive;
  };
  std::vector<Item> items;
  for (const double d : differences) {
    if (d != 0.0) items.push_back({std::abs(d), d > 0.0});
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.magnitude < b.magnitude; });

  SignedRanks out;
  out.doubled_ranks.resize(items.size());
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    while (j + 1 < items.size() && items[j + 1].magnitude == items[i].magnitude) ++j;
    // ranks i+1 .. j+1 share their average; doubled it is (i+1)+(j+1)
    const auto doubled = static_cast<std::uint32_t>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) {
      out.doubled_ranks[k] = doubled;
      if (items[k].positive) out.doubled_w_plus += doubled;
    }
    i = j + 1;
  }
  return out;
}

double wilcoxon_exact_p(const SignedRanks& ranks) {
  const std::size_t n = ranks.doubled_ranks.size();
  if (n == 0) return 1.0;
  std::uint64_t total = 0;
  for (const auto r : ranks.doubled_ranks) total += r;

  std::vector<std::uint64_t> ways(total + 1, 0);
  ways[0] = 1;
  for (const auto r : ranks.doubled_ranks) {
    for (std::uint64_t s = total; s >= r; --s) ways[s] += ways[s - r];
  }

  const auto distance = [total](std::uint64_t w) {
    const auto twice = static_cast<std::int64_t>(2 * w) - static_cast<std::int64_t>(total);
    return twice < 0 ? -twice : twice;
  };
  const auto observed = distance(ranks.doubled_w_plus);
  std::uint64_t extreme = 0;
  for (std::uint64_t s = 0; s <= total; ++s) {
    if (ways[s] != 0 && distance(s) >= observed) extreme += ways[s];
  }
  return std::ldexp(static_cast<double>(extreme), -static_cast<int>(n));
}

double wilcoxon_normal_p(const SignedRanks& ranks) {
  if (ranks.doubled_ranks.empty()) return 1.0;
  double total = 0.0;
  double sum_sq = 0.0;
  for (const auto r : ranks.doubled_ranks) {
    total += r;
    sum_sq += static_cast<double>(r) * r;
  }
  const double sd = std::sqrt(sum_sq / 4.0);
  // continuity correction of 1/2 rank, i.e. 1 in doubled units
  const double excess = std::max(0.0, std::abs(static_cast<double>(ranks.doubled_w_plus) - total / 2.0) - 1.0);
  return std::clamp(std::erfc(excess / sd / std::sqrt(2.0)), 0.0, 1.0);
}

ComparisonResult paired_compare(std::span<const double> a, std::span<const double> b,
                                PairedTest test) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch, "paired samples differ in length (" +
                                                std::to_string(a.size()) + " vs " +
                                                std::to_string(b.size()) + ")");
  }
  if (a.size() < 2) throw Error(ErrorCode::kTooFewPairs, "need at least two pairs");

  const std::size_t n = a.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];

  ComparisonResult r;
  r.test = test;
  r.n_pairs = n;
  r.mean_a = *mean_of(a);
  r.sd_a = *sample_sd(a);
  r.mean_b = *mean_of(b);
  r.sd_b = *sample_sd(b);
  r.mean_difference = *mean_of(diff);

  const bool all_zero = std::all_of(diff.begin(), diff.end(), [](double d) { return d == 0.0; });

  if (test == PairedTest::kPairedT) {
    const double sd = *sample_sd(diff);
    if (all_zero || (sd == 0.0 && r.mean_difference == 0.0)) {
      r.statistic = 0.0;
      r.p_value = 1.0;
    } else if (sd == 0.0) {
      r.statistic = std::copysign(std::numeric_limits<double>::infinity(), r.mean_difference);
      r.p_value = 0.0;
    } else {
      r.statistic = r.mean_difference / (sd / std::sqrt(static_cast<double>(n)));
      r.p_value = students_t_two_sided_p(r.statistic, static_cast<double>(n - 1));
    }
    return r;
  }

  const SignedRanks ranks = signed_ranks(diff);
  r.statistic = static_cast<double>(ranks.doubled_w_plus) / 2.0;
  if (all_zero) {
    r.p_value = 1.0;
  } else if (ranks.doubled_ranks.size() <= kWilcoxonExactLimit) {
    r.p_value = wilcoxon_exact_p(ranks);
  } else {
    r.exact = false;
    r.p_value = wilcoxon_normal_p(ranks);
  }
  return r;
}

}  // namespace orgaze
