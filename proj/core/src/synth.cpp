#include "orgaze/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "orgaze/error.hpp"
#include "orgaze/rng.hpp"

namespace orgaze {

namespace {

constexpr std::size_t kPlacementAttempts = 20000;

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorCode::kInvalidConfig, why); }

std::size_t frame_count(const SynthConfig& c) {
  return static_cast<std::size_t>(std::floor(c.phase_duration_s * c.fps + 1e-9));
}

double separation(const SynthConfig& c) { return std::max(c.min_separation_s, 2.0 / c.fps); }

std::vector<Interval> place_events(const SynthConfig& c, Rng& rng) {
  const auto n = static_cast<std::size_t>(
      std::llround(c.event_rate_per_5min * c.phase_duration_s / 300.0));
  if (n == 0) return {};

  const double min_len = 2.0 / c.fps;
  std::vector<double> durations(n);
  double mass = 0.0;
  for (auto& d : durations) {
    const double jitter = c.duration_jitter_s > 0.0
                              ? rng.uniform(-c.duration_jitter_s, c.duration_jitter_s)
                              : 0.0;
    d = std::max(min_len, c.mean_event_duration_s + jitter);
    mass += d;
  }
  const double sep = separation(c);
  if (mass + static_cast<double>(n - 1) * sep >= c.phase_duration_s) {
    throw Error(ErrorCode::kInfeasibleConfig,
                "event mass does not fit in the phase");
  }

  std::vector<Interval> placed;
  placed.reserve(n);
  for (const double d : durations) {
    bool ok = false;
    for (std::size_t attempt = 0; attempt < kPlacementAttempts && !ok; ++attempt) {
      const double onset = rng.uniform(0.0, c.phase_duration_s - d);
      const Interval iv{onset, onset + d};
      ok = std::all_of(placed.begin(), placed.end(), [&](const Interval& o) {
        return iv.start >= o.end + sep || iv.end + sep <= o.start;
      });
      if (ok) placed.push_back(iv);
    }
    if (!ok) {
      throw Error(ErrorCode::kInfeasibleConfig,
                  "could not place events disjointly after repeated sampling");
    }
  }
  std::sort(placed.begin(), placed.end(),
            [](const Interval& a, const Interval& b) { return a.start < b.start; });
  return placed;
}

FaceObservation subject_face(const SynthConfig& c, bool onfocus, Rng& rng) {
  const double m = c.confidence_margin;
  const double gate = c.fusion.in_frame_threshold;
  const double thr = c.fusion.onfocus_threshold;
  FaceObservation f;
  f.face_id = c.subject_face_id;
  f.bbox = {rng.uniform(0.30, 0.50), rng.uniform(0.20, 0.40), 0.15, 0.20};
  f.detector_confidence = rng.uniform(0.80, 1.0);
  if (onfocus) {
    f.in_frame_attention = rng.uniform(0.0, gate - m);
    f.onfocus_confidence = rng.uniform(thr + m, 1.0);
  } else if (rng.bernoulli(0.5)) {
    // attention on an object in the room
    f.in_frame_attention = rng.uniform(gate + m, 1.0);
    f.onfocus_confidence = rng.uniform(0.0, 1.0);
  } else {
    f.in_frame_attention = rng.uniform(0.0, gate - m);
    f.onfocus_confidence = rng.uniform(0.0, thr - m);
  }
  return f;
}

FaceObservation distractor_face(const SynthConfig& c, std::size_t k, Rng& rng) {
  FaceObservation f;
  f.face_id = "D" + std::to_string(k + 1);
  f.bbox = {rng.uniform(0.0, 0.85), rng.uniform(0.0, 0.85), 0.10, 0.12};
  f.detector_confidence = rng.uniform(0.50, 1.0);
  f.in_frame_attention = rng.uniform(c.fusion.in_frame_threshold + c.confidence_margin, 1.0);
  f.onfocus_confidence = rng.uniform(0.0, 1.0);
  return f;
}

std::size_t flip_candidate(const FrameRecord& frame, const FusionConfig& fusion) {
  switch (fusion.aggregation) {
    case Aggregation::kLargestFace: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < frame.faces.size(); ++i) {
        if (frame.faces[i].bbox.area() > frame.faces[best].bbox.area()) best = i;
      }
      return best;
    }
    case Aggregation::kTrackedSubject:
      for (std::size_t i = 0; i < frame.faces.size(); ++i) {
        if (frame.faces[i].face_id == fusion.tracked_face_id) return i;
      }
      return frame.faces.size();
    case Aggregation::kAnyFace:
      break;
  }
  // the face least absorbed by the scene is the likeliest camera gazer
  std::size_t best = 0;
  for (std::size_t i = 1; i < frame.faces.size(); ++i) {
    if (frame.faces[i].in_frame_attention < frame.faces[best].in_frame_attention) best = i;
  }
  return best;
}

}  // namespace

void SynthConfig::validate() const {
  fusion.validate();
  if (!(phase_duration_s > 0.0) || !std::isfinite(phase_duration_s)) invalid("phase_duration_s must be positive");
  if (!(fps > 0.0) || !std::isfinite(fps)) invalid("fps must be positive");
  if (!(event_rate_per_5min >= 0.0) || !std::isfinite(event_rate_per_5min)) invalid("event rate must be >= 0");
  if (!(mean_event_duration_s > 0.0) || !std::isfinite(mean_event_duration_s)) invalid("mean event duration must be positive");
  if (!(duration_jitter_s >= 0.0) || !std::isfinite(duration_jitter_s)) invalid("duration jitter must be >= 0");
  if (!(min_separation_s >= 0.0) || !std::isfinite(min_separation_s)) invalid("min separation must be >= 0");
  if (!(flip_probability >= 0.0 && flip_probability < 1.0)) invalid("flip_probability must lie in [0,1)");
  if (!(dropout_probability >= 0.0 && dropout_probability <= 1.0)) invalid("dropout_probability must lie in [0,1]");
  const double m = confidence_margin;
  if (!(m > 0.0) || fusion.onfocus_threshold - m < 0.0 || fusion.onfocus_threshold + m > 1.0 ||
      fusion.in_frame_threshold - m < 0.0 || fusion.in_frame_threshold + m > 1.0) {
    invalid("confidence margin must fit on both sides of each threshold");
  }
  if (frame_count(*this) < 1) invalid("phase shorter than one frame");
  for (std::size_t i = 0; i < task_script.size(); ++i) {
    const auto& t = task_script[i];
    if (t.behavior.empty()) invalid("scripted task without a behavior");
    if (!(t.interval.start >= 0.0 && t.interval.end > t.interval.start &&
          t.interval.end <= phase_duration_s)) {
      invalid("scripted task '" + t.behavior + "' must lie inside the phase");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const auto& o = task_script[j];
      if (o.behavior == t.behavior && t.interval.start < o.interval.end &&
          o.interval.start < t.interval.end) {
        invalid("scripted task '" + t.behavior + "' overlaps itself");
      }
    }
  }
}

SynthSession generate_session(const SynthConfig& c) {
  c.validate();
  Rng rng(c.seed);
  SynthSession out;

  const auto truth = place_events(c, rng);

  const std::size_t n_frames = frame_count(c);
  std::vector<double> timestamps(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) timestamps[i] = static_cast<double>(i) / c.fps;

  for (const auto& iv : truth) {
    GazeEvent e{iv, 0, std::nullopt};
    for (const double t : timestamps) e.n_frames += iv.contains(t) ? 1 : 0;
    out.truth_events.push_back(e);
  }
  const BinarySeries on = rasterize(out.truth_events, timestamps, c.fps);

  SessionFrames& s = out.frames;
  s.session_id = c.session_id;
  s.camera_id = c.camera_id;
  s.fps_nominal = c.fps;
  s.phase = Interval{0.0, c.phase_duration_s};
  s.frames.reserve(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    FrameRecord frame{i, timestamps[i], {}, c.camera_id};
    FaceObservation subject = subject_face(c, on.samples[i].value, rng);
    const bool dropped = c.dropout_probability > 0.0 && rng.bernoulli(c.dropout_probability);
    if (!dropped) frame.faces.push_back(std::move(subject));
    for (std::size_t k = 0; k < c.n_distractor_faces; ++k) {
      frame.faces.push_back(distractor_face(c, k, rng));
    }
    s.frames.push_back(std::move(frame));
  }

  for (const auto& t : c.task_script) {
    out.truth_tasks.push_back({t.behavior, c.subject, t.interval, std::nullopt});
  }
  std::sort(out.truth_tasks.begin(), out.truth_tasks.end(),
            [](const TaskInterval& a, const TaskInterval& b) {
              return a.interval.start < b.interval.start;
            });

  if (c.annotate_monitor_interactions) {
    for (const auto& e : segment(on, SegConfig{0.0, 0.0})) {
      out.annotated_interactions.push_back(e.interval);
    }
  }

  auto& rows = out.annotations;
  for (const auto& t : out.truth_tasks) {
    rows.push_back({t.interval.start, c.subject, t.behavior, std::nullopt, EventKind::kStart});
    rows.push_back({t.interval.end, c.subject, t.behavior, std::nullopt, EventKind::kStop});
  }
  for (const auto& iv : out.annotated_interactions) {
    rows.push_back({iv.start, c.subject, c.monitor_behavior, c.camera_id, EventKind::kStart});
    rows.push_back({iv.end, c.subject, c.monitor_behavior, c.camera_id, EventKind::kStop});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const AnnotationEvent& a, const AnnotationEvent& b) {
    return a.time < b.time;
  });
  std::ostringstream csv;
  write_annotations(rows, csv);
  out.annotations_csv = csv.str();

  if (c.flip_probability > 0.0) {
    s = corrupt(s, c.flip_probability, c.seed ^ 0x9E3779B97F4A7C15ULL, c.fusion);
  }
  return out;
}

SessionFrames corrupt(const SessionFrames& frames, double flip_probability, std::uint64_t seed,
                      const FusionConfig& fusion) {
  fusion.validate();
  if (!(flip_probability >= 0.0 && flip_probability <= 1.0)) {
    invalid("flip_probability must lie in [0,1]");
  }
  Rng rng(seed);
  SessionFrames out = frames;
  const double thr = fusion.onfocus_threshold;
  const double gate = fusion.in_frame_threshold;

  for (auto& frame : out.frames) {
    if (!rng.bernoulli(flip_probability)) continue;
    const FocusDecision before = decide_frame(frame, fusion);

    if (before.onfocus) {
      for (auto& face : frame.faces) {
        if (!decide_face(face, fusion)) continue;
        if (thr > 0.0) {
          face.onfocus_confidence = thr * rng.uniform();
        } else {
          face.in_frame_attention = gate + (1.0 - gate) * rng.uniform();
        }
      }
      continue;
    }

    std::size_t i = frame.faces.empty() ? 0 : flip_candidate(frame, fusion);
    if (i >= frame.faces.size()) {
      FaceObservation added;
      if (fusion.aggregation == Aggregation::kTrackedSubject) added.face_id = fusion.tracked_face_id;
      added.bbox = {0.40, 0.30, 0.15, 0.20};
      added.detector_confidence = 0.9;
      frame.faces.push_back(added);
      i = frame.faces.size() - 1;
    }
    auto& face = frame.faces[i];
    face.in_frame_attention = gate * rng.uniform();
    face.onfocus_confidence = thr + (1.0 - thr) * rng.uniform();
  }
  return out;
}

std::string truth_json(const SynthConfig& c, const SynthSession& session) {
  using nlohmann::ordered_json;
  ordered_json doc;
  ordered_json cfg;
  cfg["seed"] = c.seed;
  cfg["session_id"] = c.session_id;
  cfg["camera_id"] = c.camera_id;
  cfg["subject"] = c.subject;
  cfg["phase_duration_s"] = c.phase_duration_s;
  cfg["fps"] = c.fps;
  cfg["event_rate_per_5min"] = c.event_rate_per_5min;
  cfg["mean_event_duration_s"] = c.mean_event_duration_s;
  cfg["duration_jitter_s"] = c.duration_jitter_s;
  cfg["min_separation_s"] = c.min_separation_s;
  cfg["flip_probability"] = c.flip_probability;
  cfg["dropout_probability"] = c.dropout_probability;
  cfg["confidence_margin"] = c.confidence_margin;
  cfg["onfocus_threshold"] = c.fusion.onfocus_threshold;
  cfg["in_frame_threshold"] = c.fusion.in_frame_threshold;
  cfg["n_distractor_faces"] = c.n_distractor_faces;
  doc["config"] = std::move(cfg);

  doc["truth_events"] = ordered_json::array();
  for (const auto& e : session.truth_events) {
    doc["truth_events"].push_back(
        {{"start", e.interval.start}, {"end", e.interval.end}, {"n_frames", e.n_frames}});
  }
  doc["truth_tasks"] = ordered_json::array();
  for (const auto& t : session.truth_tasks) {
    doc["truth_tasks"].push_back({{"behavior", t.behavior},
                                  {"subject", t.subject},
                                  {"start", t.interval.start},
                                  {"end", t.interval.end}});
  }
  doc["annotated_interactions"] = ordered_json::array();
  for (const auto& iv : session.annotated_interactions) {
    doc["annotated_interactions"].push_back({{"start", iv.start}, {"end", iv.end}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace orgaze
