#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "orgaze/annotations.hpp"
#include "orgaze/frame_log.hpp"
#include "orgaze/fusion.hpp"
#include "orgaze/segmentation.hpp"

namespace orgaze {

struct ScriptedTask {
  std::string behavior;
  Interval interval;
};

/// Parameters of a synthetic session with a known gaze timeline.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::string session_id = "synth";
  std::string camera_id = "patient_monitor";
  std::string subject = "provider";
  std::string subject_face_id = "S";

  double phase_duration_s = 300.0;
  double fps = 25.0;
  double event_rate_per_5min = 14.0;
  double mean_event_duration_s = 4.59;
  double duration_jitter_s = 0.0;  // durations uniform in mean ± jitter
  /// Minimum spacing between events; never less than two frame periods so
  /// every gap holds an off frame.
  double min_separation_s = 0.5;

  double flip_probability = 0.0;     // per-frame label noise, in [0, 1)
  double dropout_probability = 0.0;  // per-frame loss of the subject face
  /// Rendered confidences keep this distance from the fusion thresholds.
  double confidence_margin = 0.05;
  FusionConfig fusion;

  std::size_t n_distractor_faces = 0;
  std::vector<ScriptedTask> task_script;

  /// Behavior used for the human-labeled monitor interactions, whose
  /// modifier is the camera id.
  std::string monitor_behavior = "Monitor interaction";
  bool annotate_monitor_interactions = true;

  /// Throws InvalidConfig.
  void validate() const;
};

struct SynthSession {
  /// Ground truth: disjoint, sorted, inside [0, phase_duration_s].
  std::vector<GazeEvent> truth_events;
  std::vector<TaskInterval> truth_tasks;
  SessionFrames frames;
  /// Monitor interactions as a frame-by-frame human coder would mark them.
  std::vector<Interval> annotated_interactions;
  std::vector<AnnotationEvent> annotations;
  std::string annotations_csv;
};

/// Deterministic for a fixed config. Throws InfeasibleConfig when the
/// requested events cannot be placed disjointly inside the phase.
SynthSession generate_session(const SynthConfig& config);

/// Flips each frame's fused verdict with probability `flip_probability` by
/// moving confidences (or the in-frame gate) across the thresholds of
/// `fusion`. Timestamps and face order are untouched; a frame without faces
/// that must turn onfocus gains one face.
SessionFrames corrupt(const SessionFrames& frames, double flip_probability, std::uint64_t seed,
                      const FusionConfig& fusion = {});

/// truth.json document: config echo, truth events and tasks.
std::string truth_json(const SynthConfig& config, const SynthSession& session);

}  // namespace orgaze
