#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orgaze/annotations.hpp"
#include "orgaze/metrics.hpp"
#include "orgaze/segmentation.hpp"

namespace orgaze {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
};

/// Frame agreement with "Onfocus" (true) as the positive class.
struct FrameScores {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  /// 2TP / (2TP + FP + FN); empty when the denominator is zero.
  std::optional<double> f1;
};

/// Throws LengthMismatch or EmptyInput.
FrameScores frame_metrics(const std::vector<bool>& predicted, const std::vector<bool>& truth);

struct FrameRef {
  std::string session_id;
  std::uint64_t frame_index = 0;

  auto operator<=>(const FrameRef&) const = default;
};

struct LabeledFrame {
  FrameRef ref;
  bool onfocus = false;
};

/// Human-labeled frames. Frame references must be unique.
struct LabeledFrameSet {
  std::vector<LabeledFrame> items;

  /// Throws DuplicateFrameRef.
  void validate() const;
};

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct DatasetSplit {
  std::vector<std::size_t> train;  // each sorted ascending
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

/// Random train/validation/test partition of indices [0, n). Validation and
/// test sizes are round(n * ratio); the remainder goes to train. Throws
/// TooSmall below 10 items and InvalidConfig for ratios that are negative or
/// do not sum to one.
DatasetSplit split_dataset(std::size_t n, const SplitRatios& ratios, std::uint64_t seed);

struct FoldScore {
  double accuracy = 0.0;
  std::optional<double> f1;
};

struct AgreementReport {
  std::vector<FoldScore> per_fold;
  double mean_accuracy = 0.0;
  std::optional<double> sd_accuracy;
  /// Over folds whose F1 is defined.
  std::optional<double> mean_f1;
  std::optional<double> sd_f1;
};

/// Scores one held-out fold. `held_out` lists indices into the item set.
using FoldScorer =
    std::function<FoldScore(const LabeledFrameSet& items, std::span<const std::size_t> held_out)>;

/// Fold assignment for k-fold CV: indices shuffled with `seed`, then cut into
/// k contiguous folds whose sizes differ by at most one (larger folds first).
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, std::uint64_t seed);

/// k-fold cross-validation with mean and sample SD across folds. Throws
/// TooFewItems when there are fewer items than folds.
AgreementReport cross_validate(const LabeledFrameSet& items, std::size_t k,
                               const FoldScorer& scorer, std::uint64_t seed = 0);

AgreementReport aggregate_folds(std::vector<FoldScore> folds);

/// Scorer comparing stored predictions (same order as the items) with the
/// labels of the held-out fold.
FoldScorer prediction_scorer(std::vector<bool> predictions);

struct VADeltas {
  double frequency_per_5min = 0.0;
  std::optional<double> mean_duration_s;  // empty unless both sides have events
  double total_time_pct = 0.0;
};

struct CrossReference {
  VAMetrics framework;
  VAMetrics human;
  VADeltas delta;  // human minus framework
};

/// Summarizes framework gaze events and human-labeled intervals over the
/// same phase.
CrossReference cross_reference(std::span<const GazeEvent> framework_events,
                               std::span<const TaskInterval> human_events, const Interval& phase,
                               FrequencyMode mode = FrequencyMode::kPhaseNormalized);

}  // namespace orgaze
