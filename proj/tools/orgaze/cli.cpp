#include "orgaze/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "orgaze/annotations.hpp"
#include "orgaze/evaluation.hpp"
#include "orgaze/frame_log.hpp"
#include "orgaze/fusion.hpp"
#include "orgaze/metrics.hpp"
#include "orgaze/report.hpp"
#include "orgaze/segmentation.hpp"
#include "orgaze/synth.hpp"
#include "orgaze/text.hpp"

namespace orgaze::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kMalformedRecord:
    case ErrorCode::kNonMonotonicTimestamp:
    case ErrorCode::kMissingMetadata:
    case ErrorCode::kEmptyLog:
    case ErrorCode::kMalformedRow:
    case ErrorCode::kUnknownKind:
    case ErrorCode::kUnmatchedStart:
    case ErrorCode::kUnmatchedStop:
    case ErrorCode::kNestedState:
    case ErrorCode::kDuplicateFrameRef:
      return kParseError;
    case ErrorCode::kLengthMismatch:
    case ErrorCode::kTooFewPairs:
    case ErrorCode::kTooSmall:
    case ErrorCode::kTooFewItems:
    case ErrorCode::kInfeasibleConfig:
    case ErrorCode::kInvalidConfig:
      return kConfigError;
    case ErrorCode::kEmptyPhase:
    case ErrorCode::kZeroTaskTime:
    case ErrorCode::kEmptyInput:
      return kAnalysisError;
  }
  return kInternal;
}

namespace {

struct OutputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void config_error(const std::string& why) {
  throw Error(ErrorCode::kInvalidConfig, why);
}

// ---- defaults file --------------------------------------------------------

/// Flag defaults, optionally overridden by a JSON config file.
struct Defaults {
  FusionConfig fusion;
  SegConfig seg;
  std::string pairing = "truncate";
  std::string frequency_mode = "phase";
  std::string human_behavior = "Monitor interaction";
};

Defaults load_defaults(const std::string& path) {
  Defaults d;
  if (path.empty()) return d;
  std::ifstream in(path);
  if (!in) config_error("config file not found: " + path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const ordered_json::exception& e) {
    config_error("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) config_error("config file must hold a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "onfocus_threshold") {
        d.fusion.onfocus_threshold = value.get<double>();
      } else if (key == "in_frame_threshold") {
        d.fusion.in_frame_threshold = value.get<double>();
      } else if (key == "aggregation") {
        const auto a = parse_aggregation(value.get<std::string>());
        if (!a) config_error("unknown aggregation in config");
        d.fusion.aggregation = *a;
      } else if (key == "subject_id") {
        d.fusion.tracked_face_id = value.get<std::string>();
      } else if (key == "max_gap") {
        d.seg.max_gap = value.get<double>();
      } else if (key == "min_duration") {
        d.seg.min_duration = value.get<double>();
      } else if (key == "pairing") {
        d.pairing = value.get<std::string>();
      } else if (key == "frequency_mode") {
        d.frequency_mode = value.get<std::string>();
      } else if (key == "human_behavior") {
        d.human_behavior = value.get<std::string>();
      } else {
        config_error("unknown config key '" + key + "'");
      }
    }
  } catch (const ordered_json::exception& e) {
    config_error("config value has the wrong type: " + std::string(e.what()));
  }
  return d;
}

std::string config_path_from(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].starts_with("--config=")) return args[i].substr(9);
  }
  if (const char* env = std::getenv(kConfigEnv); env && *env) return env;
  return {};
}

// ---- shared option groups ---------------------------------------------------

struct AnalysisOptions {
  std::string input_format = "auto";
  double onfocus_threshold = 0.72;
  double in_frame_threshold = 0.5;
  std::string aggregation = "any_face";
  std::string subject_id;
  double max_gap = 0.25;
  double min_duration = 0.30;
  std::string pairing = "truncate";
  std::string frequency_mode = "phase";
  std::string human_behavior = "Monitor interaction";
  double phase_start = 0.0;
  double phase_end = 0.0;
  CLI::Option* phase_start_opt = nullptr;
  CLI::Option* phase_end_opt = nullptr;

  explicit AnalysisOptions(const Defaults& d)
      : onfocus_threshold(d.fusion.onfocus_threshold),
        in_frame_threshold(d.fusion.in_frame_threshold),
        aggregation(std::string(to_string(d.fusion.aggregation))),
        subject_id(d.fusion.tracked_face_id),
        max_gap(d.seg.max_gap),
        min_duration(d.seg.min_duration),
        pairing(d.pairing),
        frequency_mode(d.frequency_mode),
        human_behavior(d.human_behavior) {}

  void attach(CLI::App* cmd, bool with_pairing = true) {
    cmd->add_option("--input-format", input_format, "Frame log format: auto, jsonl or csv")
        ->check(CLI::IsMember({"auto", "jsonl", "csv"}))
        ->capture_default_str();
    cmd->add_option("--onfocus-threshold", onfocus_threshold, "Onfocus confidence cut-off (inclusive)")
        ->capture_default_str();
    cmd->add_option("--in-frame-threshold", in_frame_threshold, "In-frame attention gate")
        ->capture_default_str();
    cmd->add_option("--aggregation", aggregation, "any_face, largest_face or tracked_subject")
        ->capture_default_str();
    cmd->add_option("--subject-id", subject_id, "Face id followed by tracked_subject");
    cmd->add_option("--max-gap", max_gap, "Merge runs separated by at most this many seconds")
        ->capture_default_str();
    cmd->add_option("--min-duration", min_duration, "Drop events shorter than this (seconds)")
        ->capture_default_str();
    cmd->add_option("--frequency-mode", frequency_mode, "phase or windowed")->capture_default_str();
    cmd->add_option("--human-behavior", human_behavior,
                    "Annotation behavior holding human-coded monitor interactions")
        ->capture_default_str();
    phase_start_opt = cmd->add_option("--phase-start", phase_start, "Analysis window start (s)");
    phase_end_opt = cmd->add_option("--phase-end", phase_end, "Analysis window end (s)");
    if (with_pairing) {
      cmd->add_option("--pairing", pairing, "State pairing policy: truncate or strict")
          ->capture_default_str();
    }
  }

  FusionConfig fusion() const {
    FusionConfig c;
    c.onfocus_threshold = onfocus_threshold;
    c.in_frame_threshold = in_frame_threshold;
    const auto a = parse_aggregation(aggregation);
    if (!a) config_error("unknown aggregation '" + aggregation + "'");
    c.aggregation = *a;
    c.tracked_face_id = subject_id;
    c.validate();
    return c;
  }

  SegConfig seg() const {
    SegConfig c{max_gap, min_duration};
    c.validate();
    return c;
  }

  PairingPolicy pairing_policy() const {
    if (pairing == "truncate") return PairingPolicy::kTruncate;
    if (pairing == "strict") return PairingPolicy::kStrict;
    config_error("unknown pairing policy '" + pairing + "'");
  }

  FrequencyMode frequency() const {
    if (frequency_mode == "phase") return FrequencyMode::kPhaseNormalized;
    if (frequency_mode == "windowed") return FrequencyMode::kWindowed;
    config_error("unknown frequency mode '" + frequency_mode + "'");
  }

  Interval phase_for(const SessionFrames& s) const {
    Interval p = analysis_phase(s);
    if (phase_start_opt && phase_start_opt->count() > 0) p.start = phase_start;
    if (phase_end_opt && phase_end_opt->count() > 0) p.end = phase_end;
    if (!(p.end > p.start)) throw Error(ErrorCode::kEmptyPhase, "analysis phase has no duration");
    return p;
  }

  void validate() const {
    (void)fusion();
    (void)seg();
    (void)pairing_policy();
    (void)frequency();
  }
};

struct OutputOptions {
  std::string out_dir = "orgaze_out";
  std::vector<std::string> formats = {"csv", "json"};

  void attach(CLI::App* cmd, bool with_formats) {
    cmd->add_option("--out-dir", out_dir, "Directory receiving the artifacts")->capture_default_str();
    if (with_formats) {
      cmd->add_option("--format", formats, "Artifact formats: csv, json, svg (comma separated)")
          ->delimiter(',')
          ->check(CLI::IsMember({"csv", "json", "svg"}))
          ->capture_default_str();
    }
  }

  bool wants(std::string_view f) const {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
  }
};

// ---- inputs and outputs -------------------------------------------------------

void require_file(const std::string& path) {
  std::error_code ec;
  if (path.empty() || !fs::is_regular_file(path, ec)) config_error("input file not found: " + path);
}

template <typename Fn>
auto with_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail(), e.location());
  }
}

SessionFrames load_frames(const std::string& path, const std::string& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot open " + path);
  const LogFormat f = format == "auto"  ? format_from_path(path)
                      : format == "csv" ? LogFormat::kCsv
                                        : LogFormat::kJsonl;
  return with_path(path, [&] { return parse_frame_log(in, f); });
}

AnnotationLog load_annotations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot open " + path);
  return with_path(path, [&] { return parse_annotations(in); });
}

/// Artifacts are assembled in memory and written only once everything has
/// been computed, so a failing run leaves no partial output.
class Artifacts {
 public:
  void add(std::string name, std::string content) {
    files_.emplace_back(std::move(name), std::move(content));
  }

  void write(const std::string& dir, std::ostream& out) const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw OutputFailure("cannot create " + dir + ": " + ec.message());
    for (const auto& [name, content] : files_) {
      const fs::path path = fs::path(dir) / name;
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      f << content;
      if (!f) throw OutputFailure("cannot write " + path.string());
      out << "wrote " << path.string() << '\n';
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

std::vector<TaskInterval> clip_tasks(std::vector<TaskInterval> tasks, const Interval& phase) {
  std::vector<TaskInterval> out;
  for (auto& t : tasks) {
    if (auto c = clip(t.interval, phase)) {
      t.interval = *c;
      out.push_back(std::move(t));
    }
  }
  return out;
}

/// Human-coded monitor interactions for one camera: intervals of the human
/// behavior whose modifier names this camera or is empty.
std::vector<TaskInterval> human_interactions(std::span<const TaskInterval> tasks,
                                             const std::string& behavior,
                                             const std::string& camera_id) {
  std::vector<TaskInterval> out;
  for (const auto& t : tasks) {
    if (t.behavior == behavior && (!t.modifier || *t.modifier == camera_id)) out.push_back(t);
  }
  return out;
}

double session_end(const SessionFrames& s) {
  return s.frames.back().timestamp + s.frame_period();
}

// ---- analyze ------------------------------------------------------------------

struct AnalyzeArgs {
  std::string frames;
  std::string annotations;
};

int cmd_analyze(const AnalyzeArgs& a, const AnalysisOptions& opt, const OutputOptions& output,
                std::ostream& out) {
  opt.validate();
  require_file(a.frames);
  if (!a.annotations.empty()) require_file(a.annotations);

  const SessionFrames session = load_frames(a.frames, opt.input_format);
  const Interval phase = opt.phase_for(session);
  const auto fused = decide_session(session, opt.fusion());
  const auto events = segment(fused.series, opt.seg());

  std::vector<std::pair<std::string, VAMetrics>> va = {
      {"framework", va_summary(events, phase, opt.frequency())}};

  std::vector<OverlapRow> overlap;
  std::vector<TaskInterval> tasks;
  if (!a.annotations.empty()) {
    const auto log = load_annotations(a.annotations);
    tasks = with_path(a.annotations, [&] {
      return pair_state_events(log.events, session_end(session), opt.pairing_policy());
    });
    const auto human = human_interactions(tasks, opt.human_behavior, session.camera_id);
    std::vector<Interval> human_spans;
    for (const auto& t : human) human_spans.push_back(t.interval);
    va.emplace_back("human", va_summary(std::span<const Interval>(human_spans), phase, opt.frequency()));
    overlap = task_overlap(events, clip_tasks(tasks, phase));
    for (const auto& w : log.warnings) out << "warning: " << a.annotations << ": " << w << '\n';
  }

  Artifacts files;
  if (output.wants("csv")) {
    files.add("events.csv", report::events_csv(events));
    files.add("va_metrics.csv", report::va_metrics_csv(va));
    if (!a.annotations.empty()) files.add("task_overlap.csv", report::overlap_csv(overlap));
  }
  if (output.wants("json")) {
    files.add("events.json", report::events_json(events));
    files.add("va_metrics.json", report::va_metrics_json(va));
    if (!a.annotations.empty()) files.add("task_overlap.json", report::overlap_json(overlap));
  }
  if (output.wants("svg")) {
    const auto tl = report::layout_timeline(tasks, events, "Gaze: " + session.camera_id, phase);
    files.add("timeline.svg", report::timeline_svg(tl));
  }
  files.write(output.out_dir, out);

  const auto& m = va.front().second;
  out << session.session_id << " [" << session.camera_id << "]: " << m.n_events << " events, "
      << text::format_fixed(m.frequency_per_5min, 2) << " per 5 min, total "
      << text::format_fixed(m.total_time_pct, 2) << "%";
  if (fused.tracked_subject_missing_frames > 0) {
    out << ", tracked subject missing in " << fused.tracked_subject_missing_frames << " frames";
  }
  out << '\n';
  return kOk;
}

// ---- compare ------------------------------------------------------------------

struct CompareArgs {
  std::vector<std::string> frames;
  std::vector<std::string> annotations;
  std::string context_behavior;
};

struct SessionResult {
  std::string session_id;
  std::string monitor;
  CrossReference xref;
  std::optional<double> framework_task_pct;
  std::optional<double> human_task_pct;
};

SessionResult analyze_pair(const std::string& frames_path, const std::string& annotations_path,
                           const AnalysisOptions& opt, const std::string& context) {
  const SessionFrames session = load_frames(frames_path, opt.input_format);
  const auto log = load_annotations(annotations_path);
  const Interval phase = opt.phase_for(session);
  const auto events = segment(decide_session(session, opt.fusion()).series, opt.seg());
  const auto tasks = with_path(annotations_path, [&] {
    return pair_state_events(log.events, session_end(session), opt.pairing_policy());
  });
  const auto human = human_interactions(tasks, opt.human_behavior, session.camera_id);

  SessionResult r;
  r.session_id = session.session_id;
  r.monitor = session.camera_id;
  r.xref = cross_reference(events, human, phase, opt.frequency());

  if (!context.empty()) {
    std::vector<TaskInterval> ctx;
    for (const auto& t : clip_tasks(tasks, phase)) {
      if (t.behavior == context) ctx.push_back(t);
    }
    if (!ctx.empty()) {
      std::vector<Interval> human_spans;
      for (const auto& t : human) human_spans.push_back(t.interval);
      r.framework_task_pct = task_overlap(events, ctx).front().overlap_pct;
      r.human_task_pct =
          task_overlap(std::span<const Interval>(human_spans), ctx).front().overlap_pct;
    }
  }
  return r;
}

int cmd_compare(const CompareArgs& a, const AnalysisOptions& opt, const OutputOptions& output,
                std::ostream& out) {
  opt.validate();
  if (a.frames.size() != a.annotations.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(a.frames.size()) + " frame logs but " +
                    std::to_string(a.annotations.size()) + " annotation logs");
  }
  if (a.frames.size() < 2) throw Error(ErrorCode::kTooFewPairs, "compare needs at least two sessions");
  for (const auto& p : a.frames) require_file(p);
  for (const auto& p : a.annotations) require_file(p);

  std::vector<std::future<SessionResult>> jobs;
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, analyze_pair, std::cref(a.frames[i]),
                              std::cref(a.annotations[i]), std::cref(opt),
                              std::cref(a.context_behavior)));
  }
  std::vector<SessionResult> results;
  for (auto& j : jobs) results.push_back(j.get());

  std::map<std::string, std::vector<const SessionResult*>> by_monitor;
  for (const auto& r : results) by_monitor[r.monitor].push_back(&r);

  std::vector<report::MonitorSummary> va_rows;
  std::vector<report::MonitorSummary> task_rows;
  for (const auto& [monitor, sessions] : by_monitor) {
    if (sessions.size() < 2) {
      throw Error(ErrorCode::kTooFewPairs,
                  "monitor '" + monitor + "' has only one session; need at least two");
    }
    std::vector<CrossReference> xrefs;
    std::vector<std::optional<double>> fw_task, hu_task;
    for (const auto* s : sessions) {
      xrefs.push_back(s->xref);
      fw_task.push_back(s->framework_task_pct);
      hu_task.push_back(s->human_task_pct);
    }
    va_rows.push_back(report::summarize_monitor(monitor, xrefs));
    if (!a.context_behavior.empty()) {
      report::MonitorSummary m;
      m.monitor = monitor;
      m.metrics.push_back(report::summarize_metric("task_time_pct", fw_task, hu_task));
      task_rows.push_back(std::move(m));
    }
  }

  std::ostringstream per_session;
  per_session << "session_id,monitor,framework_frequency_per_5min,human_frequency_per_5min,"
                 "framework_mean_duration_s,human_mean_duration_s,framework_total_time_pct,"
                 "human_total_time_pct,delta_frequency_per_5min,delta_mean_duration_s,"
                 "delta_total_time_pct";
  if (!a.context_behavior.empty()) per_session << ",framework_task_time_pct,human_task_time_pct";
  per_session << '\n';
  for (const auto& r : results) {
    const auto& x = r.xref;
    per_session << text::csv_escape(r.session_id) << ',' << text::csv_escape(r.monitor) << ','
                << text::format_double(x.framework.frequency_per_5min) << ','
                << text::format_double(x.human.frequency_per_5min) << ','
                << report::optional_number(x.framework.mean_duration_s) << ','
                << report::optional_number(x.human.mean_duration_s) << ','
                << text::format_double(x.framework.total_time_pct) << ','
                << text::format_double(x.human.total_time_pct) << ','
                << text::format_double(x.delta.frequency_per_5min) << ','
                << report::optional_number(x.delta.mean_duration_s) << ','
                << text::format_double(x.delta.total_time_pct);
    if (!a.context_behavior.empty()) {
      per_session << ',' << report::optional_number(r.framework_task_pct) << ','
                  << report::optional_number(r.human_task_pct);
    }
    per_session << '\n';
  }

  Artifacts files;
  const std::string table = report::va_comparison_text(va_rows);
  files.add("comparison.txt", table);
  if (output.wants("csv")) {
    files.add("comparison.csv", report::comparison_csv(va_rows));
    files.add("per_session.csv", per_session.str());
  }
  if (output.wants("json")) {
    ordered_json doc = ordered_json::array();
    for (const auto& m : va_rows) {
      ordered_json metrics = ordered_json::array();
      for (const auto& s : m.metrics) {
        metrics.push_back({{"metric", s.metric},
                           {"n_pairs", s.n_pairs},
                           {"framework_mean", s.framework_mean},
                           {"framework_sd", s.framework_sd ? ordered_json(*s.framework_sd) : ordered_json()},
                           {"human_mean", s.human_mean},
                           {"human_sd", s.human_sd ? ordered_json(*s.human_sd) : ordered_json()},
                           {"mean_delta", s.mean_delta},
                           {"p_paired_t", s.p_paired_t ? ordered_json(*s.p_paired_t) : ordered_json()},
                           {"p_wilcoxon", s.p_wilcoxon ? ordered_json(*s.p_wilcoxon) : ordered_json()}});
      }
      doc.push_back({{"monitor", m.monitor}, {"metrics", std::move(metrics)}});
    }
    files.add("comparison.json", doc.dump(2) + "\n");
  }
  if (!a.context_behavior.empty()) {
    files.add("task_comparison.txt", report::task_comparison_text(task_rows, a.context_behavior));
    if (output.wants("csv")) files.add("task_comparison.csv", report::comparison_csv(task_rows));
  }
  files.write(output.out_dir, out);
  out << table;
  return kOk;
}

// ---- evaluate -----------------------------------------------------------------

struct EvaluateArgs {
  std::string labels;
  std::string predictions;
  std::vector<std::string> frames;
  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::string model = "Complete pipeline";
  std::string dataset = "Medical simulations";
  bool write_split = false;
  std::uint64_t split_seed = 0;
};

bool parse_label(std::string_view v, std::size_t line) {
  std::string s(text::trim(v));
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "onfocus" || s == "1" || s == "true") return true;
  if (s == "out_of_focus" || s == "out of focus" || s == "0" || s == "false") return false;
  throw Error(ErrorCode::kMalformedRow, "unrecognized label '" + std::string(v) + "'", line);
}

/// Reads `session_id,frame_index,<value_column>` rows.
std::vector<LabeledFrame> read_frame_labels(const std::string& path, const std::string& value_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot open " + path);
  return with_path(path, [&] {
    std::vector<LabeledFrame> rows;
    std::string raw;
    std::size_t line = 0;
    std::array<std::size_t, 3> col{};
    bool header = false;
    while (std::getline(in, raw)) {
      ++line;
      const auto body = text::chomp(raw);
      if (text::trim(body).empty()) continue;
      const auto fields = text::split_csv_record(body);
      if (!fields) throw Error(ErrorCode::kMalformedRow, "unterminated quote", line);
      if (!header) {
        const std::array<std::string, 3> names = {"session_id", "frame_index", value_column};
        for (std::size_t c = 0; c < 3; ++c) {
          const auto it = std::find(fields->begin(), fields->end(), names[c]);
          if (it == fields->end()) {
            throw Error(ErrorCode::kMalformedRow, "header lacks column '" + names[c] + "'", line);
          }
          col[c] = static_cast<std::size_t>(it - fields->begin());
        }
        header = true;
        continue;
      }
      const auto& f = *fields;
      if (f.size() <= std::max({col[0], col[1], col[2]})) {
        throw Error(ErrorCode::kMalformedRow, "too few fields", line);
      }
      const auto idx = text::parse_uint(f[col[1]]);
      if (!idx) throw Error(ErrorCode::kMalformedRow, "frame_index must be an integer", line);
      rows.push_back({{f[col[0]], *idx}, parse_label(f[col[2]], line)});
    }
    return rows;
  });
}

int cmd_evaluate(const EvaluateArgs& a, const AnalysisOptions& opt, const OutputOptions& output,
                 std::ostream& out) {
  require_file(a.labels);
  if (a.predictions.empty() == a.frames.empty()) {
    config_error("give exactly one prediction source: --predictions or --frames");
  }
  if (!a.predictions.empty()) require_file(a.predictions);
  for (const auto& p : a.frames) require_file(p);

  LabeledFrameSet items;
  items.items = read_frame_labels(a.labels, "label");
  with_path(a.labels, [&] {
    items.validate();
    return 0;
  });

  std::map<FrameRef, bool> predicted;
  if (!a.predictions.empty()) {
    for (const auto& p : read_frame_labels(a.predictions, "prediction")) predicted[p.ref] = p.onfocus;
  } else {
    const auto fusion = opt.fusion();
    for (const auto& path : a.frames) {
      const auto session = load_frames(path, opt.input_format);
      const auto fused = decide_session(session, fusion);
      for (const auto& d : fused.decisions) predicted[{session.session_id, d.frame_index}] = d.onfocus;
    }
  }
  std::vector<bool> preds;
  preds.reserve(items.items.size());
  for (const auto& item : items.items) {
    const auto it = predicted.find(item.ref);
    if (it == predicted.end()) {
      throw Error(ErrorCode::kLengthMismatch, "no prediction for labeled frame " +
                                                  item.ref.session_id + "#" +
                                                  std::to_string(item.ref.frame_index));
    }
    preds.push_back(it->second);
  }

  const auto agreement = cross_validate(items, a.k, prediction_scorer(preds), a.seed);
  const std::vector<report::AgreementRow> rows = {{a.model, a.dataset, agreement}};

  Artifacts files;
  const std::string table = report::agreement_text(rows);
  files.add("agreement.txt", table);
  if (output.wants("csv")) {
    files.add("agreement.csv", report::agreement_csv(rows));
    files.add("folds.csv", report::folds_csv(agreement));
  }
  if (output.wants("json")) {
    ordered_json folds = ordered_json::array();
    for (const auto& f : agreement.per_fold) {
      folds.push_back({{"accuracy", f.accuracy}, {"f1", f.f1 ? ordered_json(*f.f1) : ordered_json()}});
    }
    ordered_json doc = {
        {"model", a.model},
        {"dataset", a.dataset},
        {"k", a.k},
        {"per_fold", std::move(folds)},
        {"mean_accuracy", agreement.mean_accuracy},
        {"sd_accuracy", agreement.sd_accuracy ? ordered_json(*agreement.sd_accuracy) : ordered_json()},
        {"mean_f1", agreement.mean_f1 ? ordered_json(*agreement.mean_f1) : ordered_json()},
        {"sd_f1", agreement.sd_f1 ? ordered_json(*agreement.sd_f1) : ordered_json()}};
    files.add("agreement.json", doc.dump(2) + "\n");
  }
  if (a.write_split) {
    const auto split = split_dataset(items.items.size(), SplitRatios{}, a.split_seed);
    std::vector<std::string> part(items.items.size());
    for (const auto i : split.train) part[i] = "train";
    for (const auto i : split.validation) part[i] = "validation";
    for (const auto i : split.test) part[i] = "test";
    std::ostringstream csv;
    csv << "session_id,frame_index,partition\n";
    for (std::size_t i = 0; i < items.items.size(); ++i) {
      csv << text::csv_escape(items.items[i].ref.session_id) << ',' << items.items[i].ref.frame_index
          << ',' << part[i] << '\n';
    }
    files.add("split.csv", csv.str());
  }
  files.write(output.out_dir, out);
  out << table;
  return kOk;
}

// ---- timeline -----------------------------------------------------------------

int cmd_timeline(const AnalyzeArgs& a, const AnalysisOptions& opt, const OutputOptions& output,
                 std::ostream& out) {
  opt.validate();
  require_file(a.frames);
  require_file(a.annotations);
  const SessionFrames session = load_frames(a.frames, opt.input_format);
  const auto log = load_annotations(a.annotations);
  const auto events = segment(decide_session(session, opt.fusion()).series, opt.seg());
  const auto tasks = with_path(a.annotations, [&] {
    return pair_state_events(log.events, session_end(session), opt.pairing_policy());
  });

  Interval axis = opt.phase_for(session);
  for (const auto& t : tasks) {
    axis.start = std::min(axis.start, t.interval.start);
    axis.end = std::max(axis.end, t.interval.end);
  }
  const auto tl = report::layout_timeline(tasks, events, "Gaze: " + session.camera_id, axis);

  Artifacts files;
  files.add("timeline.svg", report::timeline_svg(tl));
  files.add("timeline.csv", report::timeline_csv(tl));
  files.write(output.out_dir, out);
  return kOk;
}

// ---- synth --------------------------------------------------------------------

struct SynthArgs {
  SynthConfig config;
  std::vector<std::string> tasks;
  std::string frames_format = "jsonl";
  bool no_monitor_annotations = false;
};

ScriptedTask parse_task(const std::string& spec) {
  // behavior:start:end, behavior may itself contain ':'
  const auto last = spec.rfind(':');
  const auto mid = last == std::string::npos || last == 0 ? std::string::npos : spec.rfind(':', last - 1);
  if (mid == std::string::npos) config_error("task must be 'behavior:start:end', got '" + spec + "'");
  const auto start = text::parse_double(spec.substr(mid + 1, last - mid - 1));
  const auto end = text::parse_double(spec.substr(last + 1));
  if (!start || !end) config_error("task bounds must be numbers in '" + spec + "'");
  return {spec.substr(0, mid), {*start, *end}};
}

int cmd_synth(SynthArgs a, const OutputOptions& output, std::ostream& out) {
  for (const auto& t : a.tasks) a.config.task_script.push_back(parse_task(t));
  a.config.annotate_monitor_interactions = !a.no_monitor_annotations;
  const auto session = generate_session(a.config);

  Artifacts files;
  const bool csv = a.frames_format == "csv";
  files.add(csv ? "frames.csv" : "frames.jsonl",
            serialize_frame_log(session.frames, csv ? LogFormat::kCsv : LogFormat::kJsonl));
  files.add("annotations.csv", session.annotations_csv);
  files.add("truth.json", truth_json(a.config, session));
  files.write(output.out_dir, out);
  out << session.truth_events.size() << " gaze events, " << session.truth_tasks.size()
      << " scripted tasks, " << session.frames.frames.size() << " frames\n";
  return kOk;
}

// ---- validate -----------------------------------------------------------------

ordered_json summary_json(const ConfidenceSummary& s) {
  return {{"count", s.count}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"histogram", s.histogram}};
}

int cmd_validate(const std::string& frames, const AnalysisOptions& opt, bool as_json,
                 const std::string& out_dir, std::ostream& out) {
  require_file(frames);
  const auto session = load_frames(frames, opt.input_format);
  const auto r = validate_session(session);

  ordered_json gaps = ordered_json::array();
  for (const auto& g : r.gaps) {
    gaps.push_back({{"after_frame_index", g.after_frame_index},
                    {"from_t", g.from_t},
                    {"to_t", g.to_t},
                    {"delta_s", g.delta_s},
                    {"missing_s", g.missing_s}});
  }
  const ordered_json doc = {{"session_id", session.session_id},
                            {"camera_id", session.camera_id},
                            {"n_frames", r.n_frames},
                            {"n_faces", r.n_faces},
                            {"gaps", std::move(gaps)},
                            {"zero_face_frames", r.zero_face_frames},
                            {"zero_face_fraction", r.zero_face_fraction},
                            {"median_frame_interval_s", r.median_frame_interval_s},
                            {"detector_confidence", summary_json(r.detector_confidence)},
                            {"in_frame_attention", summary_json(r.in_frame_attention)},
                            {"onfocus_confidence", summary_json(r.onfocus_confidence)},
                            {"faces_without_onfocus", r.faces_without_onfocus},
                            {"warnings", r.warnings}};
  if (!out_dir.empty()) {
    Artifacts files;
    files.add("validation.json", doc.dump(2) + "\n");
    files.write(out_dir, out);
  }
  if (as_json) {
    out << doc.dump(2) << '\n';
    return kOk;
  }
  out << session.session_id << " [" << session.camera_id << "]: " << r.n_frames << " frames, "
      << r.n_faces << " faces\n"
      << "  gaps > 2 frame periods: " << r.gaps.size() << '\n'
      << "  zero-face fraction: " << text::format_fixed(r.zero_face_fraction, 4) << '\n'
      << "  median frame interval: " << text::format_fixed(r.median_frame_interval_s, 4) << " s\n"
      << "  mean onfocus confidence: " << text::format_fixed(r.onfocus_confidence.mean, 4) << " ("
      << r.onfocus_confidence.count << " scored, " << r.faces_without_onfocus << " unscored)\n";
  for (const auto& w : r.warnings) out << "  warning: " << w << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Defaults defaults;
  try {
    defaults = load_defaults(config_path_from(args));
  } catch (const Error& e) {
    err << "orgaze: " << e.detail() << '\n';
    return kConfigError;
  }

  CLI::App app{"Onfocus gaze analytics for operating-room recordings"};
  app.require_subcommand(1);
  std::string config_file;
  app.add_option("--config", config_file,
                 std::string("JSON file of default flag values (else $") + kConfigEnv + ")");

  AnalysisOptions analysis(defaults);
  OutputOptions output;

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Fuse, segment and summarize one session");
  analyze->add_option("--frames", analyze_args.frames, "Frame log (JSON lines or CSV)")->required();
  analyze->add_option("--annotations", analyze_args.annotations, "Behavior annotation CSV");
  analysis.attach(analyze);
  output.attach(analyze, true);

  CompareArgs compare_args;
  auto* compare = app.add_subcommand("compare", "Framework vs human observer across sessions");
  compare->add_option("--frames", compare_args.frames, "Frame logs, one per session")->required();
  compare->add_option("--annotations", compare_args.annotations, "Annotation CSVs, same order")
      ->required();
  compare->add_option("--context-behavior", compare_args.context_behavior,
                      "Task behavior for the time-during-task comparison");
  AnalysisOptions compare_analysis(defaults);
  compare_analysis.attach(compare);
  OutputOptions compare_output;
  compare_output.attach(compare, true);

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Frame agreement with k-fold summary");
  evaluate->add_option("--labels", eval_args.labels, "CSV: session_id,frame_index,label")->required();
  evaluate->add_option("--predictions", eval_args.predictions, "CSV: session_id,frame_index,prediction");
  evaluate->add_option("--frames", eval_args.frames, "Frame logs fused into predictions");
  evaluate->add_option("--k", eval_args.k, "Number of folds")->capture_default_str();
  evaluate->add_option("--seed", eval_args.seed, "Fold shuffling seed")->capture_default_str();
  evaluate->add_option("--model", eval_args.model, "Model label")->capture_default_str();
  evaluate->add_option("--dataset", eval_args.dataset, "Dataset label")->capture_default_str();
  evaluate->add_flag("--write-split", eval_args.write_split, "Also write an 80/10/10 split.csv");
  evaluate->add_option("--split-seed", eval_args.split_seed, "Split seed")->capture_default_str();
  AnalysisOptions eval_analysis(defaults);
  eval_analysis.attach(evaluate, false);
  OutputOptions eval_output;
  eval_output.attach(evaluate, true);

  AnalyzeArgs timeline_args;
  auto* timeline = app.add_subcommand("timeline", "Gantt timeline of tasks and gaze events");
  timeline->add_option("--frames", timeline_args.frames, "Frame log")->required();
  timeline->add_option("--annotations", timeline_args.annotations, "Annotation CSV")->required();
  AnalysisOptions timeline_analysis(defaults);
  timeline_analysis.attach(timeline);
  OutputOptions timeline_output;
  timeline_output.attach(timeline, false);

  SynthArgs synth_args;
  auto& sc = synth_args.config;
  auto* synth = app.add_subcommand("synth", "Write a synthetic session with known ground truth");
  synth->add_option("--seed", sc.seed)->capture_default_str();
  synth->add_option("--session-id", sc.session_id)->capture_default_str();
  synth->add_option("--camera-id", sc.camera_id)->capture_default_str();
  synth->add_option("--subject", sc.subject)->capture_default_str();
  synth->add_option("--phase", sc.phase_duration_s, "Phase length (s)")->capture_default_str();
  synth->add_option("--fps", sc.fps)->capture_default_str();
  synth->add_option("--rate", sc.event_rate_per_5min, "Gaze events per 5 min")->capture_default_str();
  synth->add_option("--duration", sc.mean_event_duration_s, "Mean event duration (s)")->capture_default_str();
  synth->add_option("--jitter", sc.duration_jitter_s, "Duration jitter half-width (s)")->capture_default_str();
  synth->add_option("--separation", sc.min_separation_s, "Minimum gap between events (s)")->capture_default_str();
  synth->add_option("--flip", sc.flip_probability, "Per-frame label flip probability")->capture_default_str();
  synth->add_option("--dropout", sc.dropout_probability, "Per-frame subject dropout probability")->capture_default_str();
  synth->add_option("--distractors", sc.n_distractor_faces, "Extra faces looking into the room")->capture_default_str();
  synth->add_option("--task", synth_args.tasks, "Scripted task 'behavior:start:end' (repeatable)");
  synth->add_option("--frames-format", synth_args.frames_format)
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();
  synth->add_flag("--no-monitor-annotations", synth_args.no_monitor_annotations,
                  "Leave human monitor interactions out of annotations.csv");
  OutputOptions synth_output;
  synth_output.attach(synth, false);

  std::string validate_frames;
  bool validate_json = false;
  std::string validate_out;
  auto* validate = app.add_subcommand("validate", "Report frame gaps and score distributions");
  validate->add_option("--frames", validate_frames, "Frame log")->required();
  validate->add_flag("--json", validate_json, "Print the report as JSON");
  validate->add_option("--out-dir", validate_out, "Also write validation.json here");
  AnalysisOptions validate_analysis(defaults);
  validate->add_option("--input-format", validate_analysis.input_format)
      ->check(CLI::IsMember({"auto", "jsonl", "csv"}));

  std::vector<std::string> argv_storage = {"orgaze"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_args, analysis, output, out);
    if (*compare) return cmd_compare(compare_args, compare_analysis, compare_output, out);
    if (*evaluate) return cmd_evaluate(eval_args, eval_analysis, eval_output, out);
    if (*timeline) return cmd_timeline(timeline_args, timeline_analysis, timeline_output, out);
    if (*synth) return cmd_synth(synth_args, synth_output, out);
    if (*validate) return cmd_validate(validate_frames, validate_analysis, validate_json, validate_out, out);
  } catch (const Error& e) {
    err << "orgaze: " << to_string(e.code()) << ": " << e.detail();
    if (e.location()) err << " (at " << *e.location() << ")";
    err << '\n';
    return exit_code_for(e.code());
  } catch (const OutputFailure& e) {
    err << "orgaze: " << e.what() << '\n';
    return kOutputError;
  } catch (const std::exception& e) {
    err << "orgaze: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace orgaze::cli
