#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace orgaze {

enum class PairedTest { kPairedT, kWilcoxonSignedRank };

std::string_view to_string(PairedTest test) noexcept;

struct ComparisonResult {
  double mean_a = 0.0;
  double sd_a = 0.0;
  double mean_b = 0.0;
  double sd_b = 0.0;
  double mean_difference = 0.0;  // mean of a - b
  /// t for the paired t-test; W+ (sum of positive ranks) for Wilcoxon.
  double statistic = 0.0;
  double p_value = 1.0;  // two-sided
  PairedTest test = PairedTest::kPairedT;
  std::size_t n_pairs = 0;
  /// Wilcoxon only: exact null distribution used (otherwise normal approx).
  bool exact = true;
};

/// Largest nonzero-difference count evaluated with the exact signed-rank
/// distribution; above it a tie-corrected normal approximation is used.
inline constexpr std::size_t kWilcoxonExactLimit = 25;

/// Paired two-sided test of a against b.
///
/// Conventions for degenerate input: when every difference is zero the
/// p-value is 1; under the t-test, zero spread with a nonzero mean
/// difference gives p = 0. Wilcoxon drops zero differences and uses average
/// ranks for tied magnitudes. Throws LengthMismatch or TooFewPairs (< 2).
ComparisonResult paired_compare(std::span<const double> a, std::span<const double> b,
                                PairedTest test);

/// Two-sided Student-t tail probability P(|T| >= |t|) with `df` degrees.
double students_t_two_sided_p(double t, double df);

/// Signed-rank data with ranks doubled so average ranks stay integral.
struct SignedRanks {
  std::vector<std::uint32_t> doubled_ranks;  // one per nonzero difference
  std::uint64_t doubled_w_plus = 0;          // sum over positive differences
};

SignedRanks signed_ranks(std::span<const double> differences);

/// Exact two-sided p = P(|W - E W| >= |w - E W|) under random signs,
/// computed by counting subset sums. Requires at most 62 ranks.
double wilcoxon_exact_p(const SignedRanks& ranks);

/// Normal approximation with tie and continuity correction.
double wilcoxon_normal_p(const SignedRanks& ranks);

}  // namespace orgaze
