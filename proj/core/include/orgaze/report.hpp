#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orgaze/annotations.hpp"
#include "orgaze/evaluation.hpp"
#include "orgaze/metrics.hpp"
#include "orgaze/segmentation.hpp"

namespace orgaze::report {

/// "m ± s" cell, e.g. "4.59 ± 1.23" or "27.23% ± 3.14%". A missing SD
/// renders as "m ± NA".
std::string mean_sd(double mean, std::optional<double> sd, int decimals, bool percent = false);
std::string optional_number(std::optional<double> v);

// ---- Agreement (model x dataset rows) -----------------------------------

struct AgreementRow {
  std::string model;
  std::string dataset;
  AgreementReport report;
};

/// Columns: model,dataset,accuracy,f1 with accuracy as a percentage cell
/// ("89.22% ± 1.26%") and F1 with two decimals ("0.87 ± 0.02").
std::string agreement_csv(std::span<const AgreementRow> rows);
std::string agreement_text(std::span<const AgreementRow> rows);
std::string folds_csv(const AgreementReport& report);

// ---- Per-session artifacts ------------------------------------------------

std::string events_csv(std::span<const GazeEvent> events);
std::string events_json(std::span<const GazeEvent> events);
std::string va_metrics_csv(const std::vector<std::pair<std::string, VAMetrics>>& rows);
std::string va_metrics_json(const std::vector<std::pair<std::string, VAMetrics>>& rows);
std::string overlap_csv(std::span<const OverlapRow> rows);
std::string overlap_json(std::span<const OverlapRow> rows);

// ---- Framework vs human ---------------------------------------------------

struct MetricSummary {
  std::string metric;  // frequency_per_5min | mean_duration_s | total_time_pct | ...
  std::size_t n_pairs = 0;
  double framework_mean = 0.0;
  std::optional<double> framework_sd;
  double human_mean = 0.0;
  std::optional<double> human_sd;
  double mean_delta = 0.0;  // human minus framework
  std::optional<double> p_paired_t;
  std::optional<double> p_wilcoxon;
};

/// Paired comparison of per-session values; pairs where either side is
/// empty are skipped. p-values are left empty below two pairs.
MetricSummary summarize_metric(std::string metric,
                               std::span<const std::optional<double>> framework,
                               std::span<const std::optional<double>> human);

struct MonitorSummary {
  std::string monitor;
  std::vector<MetricSummary> metrics;
};

/// Frequency, duration and total-time rows from per-session cross references.
MonitorSummary summarize_monitor(std::string monitor, std::span<const CrossReference> sessions);

/// Long form: monitor,metric,n_pairs,framework_mean,framework_sd,human_mean,
/// human_sd,mean_delta,p_paired_t,p_wilcoxon.
std::string comparison_csv(std::span<const MonitorSummary> monitors);
/// Monitor x detector layout with P-values of the total-time metric.
std::string va_comparison_text(std::span<const MonitorSummary> monitors);
/// Total-time-during-task layout; each summary's first metric is rendered.
std::string task_comparison_text(std::span<const MonitorSummary> monitors,
                                 const std::string& context_behavior);

// ---- Timeline ---------------------------------------------------------------

struct TimelineStyle {
  double label_width = 200.0;
  double plot_width = 800.0;
  double lane_height = 24.0;
  double bar_height = 16.0;
  double top = 30.0;
  double bottom = 30.0;
};

struct TimelineBar {
  std::string track;  // "task" or "gaze"
  std::string label;
  std::size_t row = 0;
  Interval interval;
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;
};

struct Timeline {
  Interval axis;
  std::vector<std::string> row_labels;
  std::vector<TimelineBar> bars;
  TimelineStyle style;
};

/// One row per task label (behavior plus modifier) in order of first
/// onset; intervals of one label that overlap go to extra rows. The gaze
/// track is the last row.
Timeline layout_timeline(std::span<const TaskInterval> tasks, std::span<const GazeEvent> gaze,
                         const std::string& gaze_label, const Interval& axis,
                         const TimelineStyle& style = {});

std::string timeline_csv(const Timeline& timeline);
std::string timeline_svg(const Timeline& timeline);

}  // namespace orgaze::report
