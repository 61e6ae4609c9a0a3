#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orgaze/frame_log.hpp"
#include "orgaze/segmentation.hpp"

namespace orgaze {

enum class Aggregation { kAnyFace, kLargestFace, kTrackedSubject };

std::string_view to_string(Aggregation a) noexcept;
/// Accepts any_face, largest_face, tracked_subject.
std::optional<Aggregation> parse_aggregation(std::string_view name);

struct FusionConfig {
  /// Onfocus confidence cut-off; a face passes at or above it.
  double onfocus_threshold = 0.72;
  /// Gate on the in-frame attention scalar; at or above it the gaze target
  /// is inside the scene, so the face cannot be looking at the camera.
  double in_frame_threshold = 0.5;
  Aggregation aggregation = Aggregation::kAnyFace;
  /// Face id followed under kTrackedSubject.
  std::string tracked_face_id;

  void validate() const;
};

enum class FaceVerdict {
  kOnfocus,
  kGatedInFrame,     // attention target inside the frame
  kNoConfidence,     // gate passed but no onfocus score was produced
  kBelowThreshold,
};

FaceVerdict classify_face(const FaceObservation& face, const FusionConfig& config);

inline bool decide_face(const FaceObservation& face, const FusionConfig& config) {
  return classify_face(face, config) == FaceVerdict::kOnfocus;
}

struct FocusDecision {
  std::uint64_t frame_index = 0;
  bool onfocus = false;
  std::optional<std::size_t> winning_face;  // index into FrameRecord::faces
  std::optional<double> winning_confidence;
  /// kTrackedSubject only: no face carried the tracked id.
  bool tracked_subject_missing = false;

  bool operator==(const FocusDecision&) const = default;
};

/// Frame verdict under the configured aggregation. Among passing faces the
/// winner has the highest onfocus confidence, then the larger box, then the
/// lower list index.
FocusDecision decide_frame(const FrameRecord& frame, const FusionConfig& config);

struct FusedSession {
  BinarySeries series;
  std::vector<FocusDecision> decisions;
  std::size_t tracked_subject_missing_frames = 0;
};

FusedSession decide_session(const SessionFrames& session, const FusionConfig& config);

}  // namespace orgaze
