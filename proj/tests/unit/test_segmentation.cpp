#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "orgaze/error.hpp"
#include "orgaze/segmentation.hpp"

using namespace orgaze;
using orgaze::testing::brute_force_segment;
using orgaze::testing::random_series;

namespace {

BinarySeries from_pattern(const std::string& bits, double fps = 25.0) {
  BinarySeries s;
  s.fps_nominal = fps;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    s.samples.push_back({static_cast<double>(i) / fps, bits[i] == '1', std::nullopt});
  }
  return s;
}

double total(const std::vector<GazeEvent>& ev) {
  double t = 0;
  for (const auto& e : ev) t += e.duration();
  return t;
}

}  // namespace

TEST(Segment, AllFalse) {
  EXPECT_TRUE(segment(from_pattern("0000000"), {}).empty());
  EXPECT_TRUE(segment(BinarySeries{}, {}).empty());
}

TEST(Segment, FullRunIsFiveSeconds) {
  const auto ev = segment(from_pattern(std::string(125, '1')), {});
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].interval.start, 0.0);
  EXPECT_NEAR(ev[0].interval.end, 5.0, 1e-12);
  EXPECT_NEAR(ev[0].duration(), 5.0, 1e-12);
  EXPECT_EQ(ev[0].n_frames, 125u);
}

TEST(Segment, ShortGapMerges) {
  // [0,1.0) true, 0.2 s false, [1.2,2.0) true
  const auto s = from_pattern(std::string(25, '1') + "00000" + std::string(20, '1'));
  const auto ev = segment(s, {0.25, 0.30});
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].interval.start, 0.0);
  EXPECT_NEAR(ev[0].interval.end, 2.0, 1e-12);
  EXPECT_EQ(ev[0].n_frames, 45u);
  EXPECT_EQ(segment(s, {0.1, 0.0}).size(), 2u);
}

TEST(Segment, IsolatedFrameFiltered) {
  EXPECT_TRUE(segment(from_pattern("0001000"), {0.25, 0.30}).empty());
  EXPECT_EQ(segment(from_pattern("0001000"), {0.0, 0.0}).size(), 1u);
}

TEST(Segment, RunEndClippedToNextSample) {
  BinarySeries s;
  s.fps_nominal = 25;
  s.samples = {{0.0, true, 0.9}, {0.01, false, std::nullopt}};
  const auto ev = segment(s, {0, 0});
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].interval.end, 0.01);
  EXPECT_EQ(ev[0].mean_confidence, 0.9);
}

TEST(Segment, RejectsBadConfig) {
  EXPECT_THROW(segment(from_pattern("1"), {-1.0, 0.0}), Error);
  EXPECT_THROW(segment(from_pattern("1"), {0.0, std::nan("")}), Error);
}

TEST(SeriesStats, Examples) {
  std::vector<GazeEvent> ev{{{0, 4}, 1, {}}, {{10, 15}, 1, {}}, {{20, 26}, 1, {}}};
  auto st = series_stats(ev);
  EXPECT_EQ(st.count, 3u);
  EXPECT_DOUBLE_EQ(*st.mean_duration, 5.0);
  EXPECT_DOUBLE_EQ(*st.sd_duration, 1.0);
  EXPECT_DOUBLE_EQ(st.total_duration, 15.0);

  st = series_stats(std::vector<GazeEvent>{{{0, 2}, 1, {}}});
  EXPECT_EQ(st.count, 1u);
  EXPECT_DOUBLE_EQ(*st.mean_duration, 2.0);
  EXPECT_FALSE(st.sd_duration.has_value());

  st = series_stats({});
  EXPECT_EQ(st.count, 0u);
  EXPECT_FALSE(st.mean_duration.has_value());
  EXPECT_FALSE(st.sd_duration.has_value());
  EXPECT_EQ(st.total_duration, 0.0);
}

TEST(SegmentProperty, MatchesBruteForce) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_series(rng, 2000);
    const SegConfig c{u(rng) * 0.5, u(rng) * 0.6};
    EXPECT_EQ(segment(s, c), brute_force_segment(s, c.max_gap, c.min_duration)) << trial;
  }
}

TEST(SegmentProperty, DisjointSortedAndBounded) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_series(rng, 2000);
    const auto ev = segment(s, {});
    for (std::size_t i = 0; i < ev.size(); ++i) {
      EXPECT_LT(ev[i].interval.start, ev[i].interval.end);
      EXPECT_GE(ev[i].duration(), 0.30);
      if (i > 0) {
        EXPECT_LE(ev[i - 1].interval.end, ev[i].interval.start);
      }
    }
    EXPECT_LE(total(ev), s.samples.back().timestamp - s.samples.front().timestamp +
                             1.0 / s.fps_nominal + 1e-9);
  }
}

TEST(SegmentProperty, Idempotent) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_series(rng, 2000);
    const auto ev = segment(s, {});
    const auto ts = orgaze::testing::timestamps_of(s);
    const auto again = segment(rasterize(ev, ts, s.fps_nominal), {0.0, 0.0});
    ASSERT_EQ(again.size(), ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) {
      EXPECT_EQ(again[i].interval, ev[i].interval);
    }
  }
}

TEST(SegmentProperty, MonotoneInGapAndDuration) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_series(rng, 2000);
    const double g1 = u(rng) * 0.5, g2 = g1 + u(rng) * 0.5;
    const double d1 = u(rng) * 0.5, d2 = d1 + u(rng) * 0.5;
    EXPECT_GE(segment(s, {g1, 0.0}).size(), segment(s, {g2, 0.0}).size());
    const auto wider = segment(s, {g2, d1});
    for (const auto& e : segment(s, {g1, d1})) {
      EXPECT_TRUE(std::any_of(wider.begin(), wider.end(), [&](const GazeEvent& w) {
        return w.interval.start <= e.interval.start && e.interval.end <= w.interval.end;
      }));
    }
    const auto a = segment(s, {g1, d1});
    const auto b = segment(s, {g1, d2});
    EXPECT_GE(a.size(), b.size());
    EXPECT_GE(total(a), total(b));
  }
}

TEST(Segment, MergingCanRescueShortRuns) {
  // two 0.2 s runs 0.12 s apart: dropped separately, kept once merged
  const auto s = from_pattern("11111000" "11111");
  EXPECT_TRUE(segment(s, {0.0, 0.30}).empty());
  EXPECT_EQ(segment(s, {0.25, 0.30}).size(), 1u);
}

TEST(Rasterize, MarksHalfOpenMembership) {
  const std::vector<GazeEvent> ev{{{0.04, 0.12}, 2, {}}};
  const std::vector<double> ts{0.0, 0.04, 0.08, 0.12};
  const auto r = rasterize(ev, ts, 25.0);
  ASSERT_EQ(r.samples.size(), 4u);
  EXPECT_FALSE(r.samples[0].value);
  EXPECT_TRUE(r.samples[1].value);
  EXPECT_TRUE(r.samples[2].value);
  EXPECT_FALSE(r.samples[3].value);
}
