// Sanity checks on the test oracles themselves against hand-computed values.
#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace orgaze::testing;

TEST(Oracles, ClosedFormTKnownValues) {
  // Cauchy: P(|T| >= 1) = 0.5
  EXPECT_NEAR(closed_form_t_p(1.0, 1), 0.5, 1e-15);
  // nu = 2: P(|T| >= t) = 1 - t / sqrt(2 + t^2)
  EXPECT_NEAR(closed_form_t_p(1.5, 2), 1.0 - 1.5 / std::sqrt(4.25), 1e-15);
  EXPECT_NEAR(closed_form_t_p(0.0, 7), 1.0, 1e-15);
  // tabulated 97.5% quantile for nu = 10 is 2.228139
  EXPECT_NEAR(closed_form_t_p(2.228139, 10), 0.05, 1e-6);
}

TEST(Oracles, EnumeratedWilcoxonSmallCases) {
  // one positive difference out of one: both sign patterns are as extreme
  EXPECT_EQ(enumerated_wilcoxon_p({1.0}, {0.0}), 1.0);
  // three positives: only the all-plus and all-minus patterns reach |2W - T| = 12
  EXPECT_EQ(enumerated_wilcoxon_p({1, 2, 3}, {0, 0, 0}), 0.25);
  EXPECT_EQ(enumerated_wilcoxon_p({1, 2}, {1, 2}), 1.0);
}

TEST(Oracles, BruteForceSegmenterByHand) {
  orgaze::BinarySeries s;
  s.fps_nominal = 10;
  const std::string bits = "0110001100001";
  for (std::size_t i = 0; i < bits.size(); ++i) s.samples.push_back({i * 0.1, bits[i] == '1', 0.5});
  auto ev = brute_force_segment(s, 0.0, 0.0);
  ASSERT_EQ(ev.size(), 3u);
  EXPECT_NEAR(ev[0].interval.start, 0.1, 1e-12);
  EXPECT_NEAR(ev[0].interval.end, 0.3, 1e-12);
  ev = brute_force_segment(s, 0.31, 0.0);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].n_frames, 4u);
  ev = brute_force_segment(s, 0.0, 0.15);
  EXPECT_EQ(ev.size(), 2u);
}

TEST(Oracles, RasterOverlap) {
  EXPECT_NEAR(rasterized_overlap_pct({{10, 20}}, {{0, 40}}), 25.0, 1e-9);
  EXPECT_NEAR(rasterized_overlap_pct({{0, 15}}, {{0, 10}, {5, 15}}), 100.0, 1e-9);
}
