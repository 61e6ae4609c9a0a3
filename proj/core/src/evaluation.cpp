#include "orgaze/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "orgaze/descriptive.hpp"
#include "orgaze/error.hpp"
#include "orgaze/rng.hpp"

namespace orgaze {

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

}  // namespace

FrameScores frame_metrics(const std::vector<bool>& predicted, const std::vector<bool>& truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, "prediction and label counts differ");
  }
  if (predicted.empty()) throw Error(ErrorCode::kEmptyInput, "no frames to score");

  FrameScores s;
  auto& c = s.confusion;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i]) {
      truth[i] ? ++c.tp : ++c.fp;
    } else {
      truth[i] ? ++c.fn : ++c.tn;
    }
  }
  s.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  const std::size_t denom = 2 * c.tp + c.fp + c.fn;
  if (denom > 0) s.f1 = static_cast<double>(2 * c.tp) / static_cast<double>(denom);
  return s;
}

void LabeledFrameSet::validate() const {
  std::set<FrameRef> seen;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!seen.insert(items[i].ref).second) {
      throw Error(ErrorCode::kDuplicateFrameRef,
                  "frame " + items[i].ref.session_id + "#" +
                      std::to_string(items[i].ref.frame_index) + " labeled twice",
                  i);
    }
  }
}

DatasetSplit split_dataset(std::size_t n, const SplitRatios& ratios, std::uint64_t seed) {
  if (n < 10) throw Error(ErrorCode::kTooSmall, "need at least 10 items to split");
  if (ratios.train < 0.0 || ratios.validation < 0.0 || ratios.test < 0.0 ||
      std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidConfig, "split ratios must be non-negative and sum to 1");
  }
  const auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratios.validation));
  const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratios.test));
  const auto idx = shuffled_indices(n, seed);

  DatasetSplit out;
  out.validation.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
  out.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_val),
                  idx.begin() + static_cast<std::ptrdiff_t>(n_val + n_test));
  out.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_val + n_test), idx.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.validation.begin(), out.validation.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k,
                                                 std::uint64_t seed) {
  if (k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be positive");
  if (n < k) {
    throw Error(ErrorCode::kTooFewItems,
                std::to_string(n) + " items cannot fill " + std::to_string(k) + " folds");
  }
  const auto idx = shuffled_indices(n, seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(idx.begin() + static_cast<std::ptrdiff_t>(pos),
                    idx.begin() + static_cast<std::ptrdiff_t>(pos + size));
    std::sort(folds[f].begin(), folds[f].end());
    pos += size;
  }
  return folds;
}

AgreementReport aggregate_folds(std::vector<FoldScore> folds) {
  AgreementReport r;
  std::vector<double> acc, f1;
  for (const auto& f : folds) {
    acc.push_back(f.accuracy);
    if (f.f1) f1.push_back(*f.f1);
  }
  r.per_fold = std::move(folds);
  r.mean_accuracy = mean_of(acc).value_or(0.0);
  r.sd_accuracy = sample_sd(acc);
  r.mean_f1 = mean_of(f1);
  r.sd_f1 = sample_sd(f1);
  return r;
}

AgreementReport cross_validate(const LabeledFrameSet& items, std::size_t k,
                               const FoldScorer& scorer, std::uint64_t seed) {
  items.validate();
  std::vector<FoldScore> scores;
  for (const auto& fold : make_folds(items.items.size(), k, seed)) {
    scores.push_back(scorer(items, fold));
  }
  return aggregate_folds(std::move(scores));
}

FoldScorer prediction_scorer(std::vector<bool> predictions) {
  return [predictions = std::move(predictions)](const LabeledFrameSet& items,
                                                std::span<const std::size_t> held_out) {
    if (predictions.size() != items.items.size()) {
      throw Error(ErrorCode::kLengthMismatch, "one prediction per labeled frame is required");
    }
    std::vector<bool> pred, truth;
    for (const auto i : held_out) {
      pred.push_back(predictions[i]);
      truth.push_back(items.items[i].onfocus);
    }
    const auto s = frame_metrics(pred, truth);
    return FoldScore{s.accuracy, s.f1};
  };
}

CrossReference cross_reference(std::span<const GazeEvent> framework_events,
                               std::span<const TaskInterval> human_events, const Interval& phase,
                               FrequencyMode mode) {
  std::vector<Interval> human;
  human.reserve(human_events.size());
  for (const auto& t : human_events) human.push_back(t.interval);

  CrossReference x;
  x.framework = va_summary(framework_events, phase, mode);
  x.human = va_summary(std::span<const Interval>(human), phase, mode);
  x.delta.frequency_per_5min = x.human.frequency_per_5min - x.framework.frequency_per_5min;
  x.delta.total_time_pct = x.human.total_time_pct - x.framework.total_time_pct;
  if (x.human.mean_duration_s && x.framework.mean_duration_s) {
    x.delta.mean_duration_s = *x.human.mean_duration_s - *x.framework.mean_duration_s;
  }
  return x;
}

}  // namespace orgaze
