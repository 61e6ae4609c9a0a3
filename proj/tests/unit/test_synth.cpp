#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "orgaze/error.hpp"
#include "orgaze/fusion.hpp"
#include "orgaze/metrics.hpp"
#include "orgaze/segmentation.hpp"
#include "orgaze/synth.hpp"

using namespace orgaze;

namespace {

std::vector<bool> decisions(const SessionFrames& frames, const FusionConfig& c = {}) {
  std::vector<bool> out;
  for (const auto& f : decide_session(frames, c).series.samples) out.push_back(f.value);
  return out;
}

std::vector<bool> truth_decisions(const SynthSession& s) {
  std::vector<bool> out;
  for (const auto& f : s.frames.frames) {
    bool on = false;
    for (const auto& e : s.truth_events) on = on || e.interval.contains(f.timestamp);
    out.push_back(on);
  }
  return out;
}

}  // namespace

TEST(Synth, RateZeroIsAllFalse) {
  SynthConfig c;
  c.event_rate_per_5min = 0;
  const auto s = generate_session(c);
  EXPECT_TRUE(s.truth_events.empty());
  for (const bool b : decisions(s.frames)) EXPECT_FALSE(b);
}

TEST(Synth, DefaultSessionRecoversFourteenEvents) {
  const SynthConfig c;
  const auto s = generate_session(c);
  ASSERT_EQ(s.truth_events.size(), 14u);
  EXPECT_EQ(s.frames.frames.size(), 7500u);
  const auto ev = segment(decide_session(s.frames, c.fusion).series, {0.0, 0.0});
  ASSERT_EQ(ev.size(), 14u);
  double mean = 0;
  for (const auto& e : ev) mean += e.duration();
  mean /= 14.0;
  EXPECT_NEAR(mean, 4.59, 1.0 / c.fps);
  const auto m = va_summary(ev, {0, 300});
  EXPECT_NEAR(m.frequency_per_5min, 14.0, 1e-9);
}

TEST(Synth, Deterministic) {
  SynthConfig c;
  c.seed = 12345;
  c.duration_jitter_s = 1.5;
  c.flip_probability = 0.05;
  c.n_distractor_faces = 2;
  c.task_script = {{"Airway manipulation", {20, 80}}};
  const auto a = generate_session(c), b = generate_session(c);
  EXPECT_EQ(a.frames, b.frames);
  EXPECT_EQ(a.annotations_csv, b.annotations_csv);
  EXPECT_EQ(truth_json(c, a), truth_json(c, b));
  c.seed = 12346;
  EXPECT_NE(generate_session(c).frames, a.frames);
}

TEST(Synth, InfeasibleConfig) {
  SynthConfig c;
  c.phase_duration_s = 60;
  c.event_rate_per_5min = 100;
  c.mean_event_duration_s = 5;
  try {
    generate_session(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleConfig);
  }
  c = {};
  c.flip_probability = 1.5;
  EXPECT_THROW(generate_session(c), Error);
}

TEST(Synth, TaskScriptAndAnnotations) {
  SynthConfig c;
  c.task_script = {{"Mask ventilation", {40, 90}}, {"Airway manipulation", {60, 150}}};
  const auto s = generate_session(c);
  ASSERT_EQ(s.truth_tasks.size(), 2u);
  EXPECT_EQ(s.truth_tasks[0].interval, (Interval{40, 90}));
  EXPECT_EQ(s.annotated_interactions.size(), s.truth_events.size());
  for (std::size_t i = 0; i < s.truth_events.size(); ++i) {
    EXPECT_NEAR(s.annotated_interactions[i].start, s.truth_events[i].interval.start, 1.0 / c.fps);
    EXPECT_NEAR(s.annotated_interactions[i].end, s.truth_events[i].interval.end, 1.0 / c.fps);
  }
}

TEST(SynthProperty, TruthDisjointInsidePhaseAndRenderedExactly) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    SynthConfig c;
    c.seed = rng();
    c.phase_duration_s = 60 + u(rng) * 240;
    c.fps = std::array<double, 3>{10, 25, 30}[rng() % 3];
    c.event_rate_per_5min = u(rng) * 30;
    c.mean_event_duration_s = 0.5 + u(rng) * 4;
    c.duration_jitter_s = u(rng) * 0.4;
    c.n_distractor_faces = rng() % 3;
    c.fusion.aggregation = trial % 2 ? Aggregation::kAnyFace : Aggregation::kTrackedSubject;
    c.fusion.tracked_face_id = c.subject_face_id;
    const auto s = generate_session(c);
    for (std::size_t i = 0; i < s.truth_events.size(); ++i) {
      const auto& iv = s.truth_events[i].interval;
      EXPECT_GE(iv.start, 0.0);
      EXPECT_LE(iv.end, c.phase_duration_s);
      if (i > 0) {
        EXPECT_LT(s.truth_events[i - 1].interval.end, iv.start);
      }
    }
    EXPECT_EQ(decisions(s.frames, c.fusion), truth_decisions(s));
  }
}

TEST(Corrupt, ZeroAndOne) {
  SynthConfig c;
  c.n_distractor_faces = 1;
  const auto s = generate_session(c);
  const auto base = decisions(s.frames);
  EXPECT_EQ(decisions(corrupt(s.frames, 0.0, 1)), base);
  const auto flipped = decisions(corrupt(s.frames, 1.0, 1));
  ASSERT_EQ(flipped.size(), base.size());
  for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NE(flipped[i], base[i]) << i;
}

TEST(Corrupt, OneTenthFlipRate) {
  SynthConfig c;
  c.phase_duration_s = 400;  // 10^4 frames at 25 fps
  const auto s = generate_session(c);
  ASSERT_EQ(s.frames.frames.size(), 10000u);
  const auto base = decisions(s.frames);
  const auto noisy = decisions(corrupt(s.frames, 0.1, 99));
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < base.size(); ++i) flipped += base[i] != noisy[i];
  EXPECT_NEAR(static_cast<double>(flipped) / 1e4, 0.1, 0.01);
}

TEST(Corrupt, LargestFaceAggregation) {
  SynthConfig c;
  c.n_distractor_faces = 2;
  c.fusion.aggregation = Aggregation::kLargestFace;
  const auto s = generate_session(c);
  const auto base = decisions(s.frames, c.fusion);
  const auto flipped = decisions(corrupt(s.frames, 1.0, 3, c.fusion), c.fusion);
  for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NE(flipped[i], base[i]) << i;
}

TEST(SynthProperty, HalfFlipMixture) {
  // With p = 0.5 each frame is onfocus with probability 0.5 whatever the
  // truth, so recovered total time concentrates at 50% of the phase.
  double sum = 0;
  const int seeds = 24;
  for (int seed = 1; seed <= seeds; ++seed) {
    SynthConfig c;
    c.seed = static_cast<std::uint64_t>(seed);
    c.flip_probability = 0.5;
    const auto s = generate_session(c);
    const auto ev = segment(decide_session(s.frames, c.fusion).series, {0.0, 0.0});
    const double pct = va_summary(ev, {0, c.phase_duration_s}).total_time_pct;
    // per session: 7500 Bernoulli(0.5) frames, sd 0.58 pp; 5 sd bound
    EXPECT_NEAR(pct, 50.0, 2.9);
    sum += pct;
  }
  EXPECT_NEAR(sum / seeds, 50.0, 0.6);
}
