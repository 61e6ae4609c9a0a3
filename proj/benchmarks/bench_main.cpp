#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "orgaze/frame_log.hpp"
#include "orgaze/fusion.hpp"
#include "orgaze/metrics.hpp"
#include "orgaze/segmentation.hpp"
#include "orgaze/statistics.hpp"
#include "orgaze/synth.hpp"

using namespace orgaze;

namespace {

SynthSession session_of(double seconds) {
  SynthConfig c;
  c.phase_duration_s = seconds;
  c.n_distractor_faces = 2;
  c.flip_probability = 0.02;
  return generate_session(c);
}

void BM_ParseFrameLog(benchmark::State& state) {
  const auto text = serialize_frame_log(session_of(static_cast<double>(state.range(0))).frames,
                                        LogFormat::kJsonl);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_frame_log(std::string_view(text), LogFormat::kJsonl));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseFrameLog)->Arg(60)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_DecideSession(benchmark::State& state) {
  const auto s = session_of(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decide_session(s.frames, FusionConfig{}));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * s.frames.frames.size()));
}
BENCHMARK(BM_DecideSession)->Arg(300)->Arg(3600);

void BM_Segment(benchmark::State& state) {
  const auto s = session_of(static_cast<double>(state.range(0)));
  const auto series = decide_session(s.frames, FusionConfig{}).series;
  for (auto _ : state) benchmark::DoNotOptimize(segment(series, SegConfig{}));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * series.samples.size()));
}
BENCHMARK(BM_Segment)->Arg(300)->Arg(3600);

void BM_TaskOverlap(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 3600.0);
  std::vector<Interval> gaze;
  std::vector<TaskInterval> tasks;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    const double s = u(rng);
    gaze.push_back({s, s + 4.0});
    const double t = u(rng);
    tasks.push_back({i % 3 ? "Mask ventilation" : "Airway manipulation", "r1", {t, t + 30.0}, std::nullopt});
  }
  for (auto _ : state) benchmark::DoNotOptimize(task_overlap(gaze, tasks));
}
BENCHMARK(BM_TaskOverlap)->Arg(100)->Arg(10000);

void BM_WilcoxonExact(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.3, 1.0);
  std::vector<double> d(static_cast<std::size_t>(state.range(0)));
  for (auto& x : d) x = n(rng);
  const auto ranks = signed_ranks(d);
  for (auto _ : state) benchmark::DoNotOptimize(wilcoxon_exact_p(ranks));
}
BENCHMARK(BM_WilcoxonExact)->Arg(12)->Arg(25)->Arg(62);

}  // namespace

BENCHMARK_MAIN();
