#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "orgaze/error.hpp"
#include "orgaze/statistics.hpp"

using namespace orgaze;
using orgaze::testing::closed_form_t_p;
using orgaze::testing::enumerated_wilcoxon_p;
using orgaze::testing::reference_paired_t_p;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double scale, bool coarse) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) {
    x = g(rng);
    if (coarse) x = std::round(x);  // forces ties and zero differences
  }
  return v;
}

}  // namespace

TEST(PairedCompare, IdenticalVectorsGivePOne) {
  const std::vector<double> a{3.1, 4.2, 5.0, 2.2};
  for (const auto test : {PairedTest::kPairedT, PairedTest::kWilcoxonSignedRank}) {
    const auto r = paired_compare(a, a, test);
    EXPECT_EQ(r.p_value, 1.0);
    EXPECT_EQ(r.mean_difference, 0.0);
  }
}

TEST(PairedCompare, ConstantShiftGivesPZero) {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{2, 3, 4, 5, 6};
  const auto r = paired_compare(a, b, PairedTest::kPairedT);
  EXPECT_EQ(r.p_value, 0.0);
  EXPECT_EQ(r.mean_difference, -1.0);
  EXPECT_TRUE(std::isinf(r.statistic));
  EXPECT_LT(r.statistic, 0.0);
}

TEST(PairedCompare, Errors) {
  const std::vector<double> a{1, 2, 3}, b{1, 2};
  try {
    paired_compare(a, b, PairedTest::kPairedT);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
  try {
    paired_compare(std::vector<double>{1}, std::vector<double>{2}, PairedTest::kPairedT);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewPairs);
  }
}

TEST(PairedCompare, KnownTextbookValues) {
  // d = {1,2,3,4,5}: mean 3, sd sqrt(2.5), t = 3/(sqrt(2.5)/sqrt(5)) = 4.2426..., df 4
  const std::vector<double> a{1, 2, 3, 4, 5}, b{0, 0, 0, 0, 0};
  const auto t = paired_compare(a, b, PairedTest::kPairedT);
  EXPECT_NEAR(t.statistic, 3.0 / std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(t.p_value, 0.013236, 1e-6);
  // all five positive: W+ = 15, exact two-sided p = 2/32
  const auto w = paired_compare(a, b, PairedTest::kWilcoxonSignedRank);
  EXPECT_EQ(w.statistic, 15.0);
  EXPECT_EQ(w.p_value, 0.0625);
  EXPECT_TRUE(w.exact);
}

TEST(StudentT, MatchesClosedFormSeries) {
  for (int nu = 1; nu <= 40; ++nu) {
    for (const double t : {0.0, 0.3, 1.0, 2.2, 4.5, 12.0}) {
      EXPECT_NEAR(students_t_two_sided_p(t, nu), closed_form_t_p(t, nu), 1e-12)
          << "t=" << t << " nu=" << nu;
    }
  }
}

TEST(StatisticsProperty, PairedTMatchesReference) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    const auto a = random_vec(rng, n, 5.0, false);
    auto b = random_vec(rng, n, 5.0, false);
    for (auto& x : b) x += 0.5;
    const auto r = paired_compare(a, b, PairedTest::kPairedT);
    EXPECT_NEAR(r.p_value, reference_paired_t_p(a, b), 1e-9);
  }
}

TEST(StatisticsProperty, WilcoxonExactMatchesEnumeration) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    const bool coarse = trial % 2 == 0;
    const auto a = random_vec(rng, n, 2.0, coarse);
    const auto b = random_vec(rng, n, 2.0, coarse);
    const auto r = paired_compare(a, b, PairedTest::kWilcoxonSignedRank);
    EXPECT_EQ(r.p_value, enumerated_wilcoxon_p(a, b)) << "trial " << trial;
  }
}

TEST(StatisticsProperty, SymmetricInArguments) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    const auto a = random_vec(rng, n, 3.0, trial % 3 == 0);
    const auto b = random_vec(rng, n, 3.0, trial % 3 == 0);
    for (const auto test : {PairedTest::kPairedT, PairedTest::kWilcoxonSignedRank}) {
      const auto ab = paired_compare(a, b, test);
      const auto ba = paired_compare(b, a, test);
      EXPECT_EQ(ab.p_value, ba.p_value);
      EXPECT_GE(ab.p_value, 0.0);
      EXPECT_LE(ab.p_value, 1.0);
    }
  }
}

TEST(Wilcoxon, NormalApproximationAboveLimit) {
  std::mt19937_64 rng(73);
  const auto a = random_vec(rng, 60, 1.0, false);
  auto b = a;
  for (auto& x : b) x -= 0.3;
  const auto r = paired_compare(a, b, PairedTest::kWilcoxonSignedRank);
  EXPECT_FALSE(r.exact);
  EXPECT_LT(r.p_value, 1e-6);
}

TEST(Wilcoxon, NormalApproximationTracksExactNearLimit) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_vec(rng, 25, 1.0, false);
    const auto b = random_vec(rng, 25, 1.0, false);
    std::vector<double> d(25);
    for (std::size_t i = 0; i < 25; ++i) d[i] = a[i] - b[i];
    const auto ranks = signed_ranks(d);
    EXPECT_NEAR(wilcoxon_exact_p(ranks), wilcoxon_normal_p(ranks), 0.01);
  }
}

TEST(Wilcoxon, SignedRanksAverageTies) {
  const std::vector<double> d{1.0, -1.0, 2.0, 0.0, -3.0};
  const auto r = signed_ranks(d);
  // magnitudes 1,1,2,3 -> ranks 1.5,1.5,3,4 (doubled 3,3,6,8); positives 1.0 and 2.0
  ASSERT_EQ(r.doubled_ranks.size(), 4u);
  EXPECT_EQ(r.doubled_w_plus, 9u);
}
