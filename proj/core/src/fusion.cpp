#include "orgaze/fusion.hpp"

#include "orgaze/error.hpp"

namespace orgaze {

std::string_view to_string(Aggregation a) noexcept {
  switch (a) {
    case Aggregation::kAnyFace: return "any_face";
    case Aggregation::kLargestFace: return "largest_face";
    case Aggregation::kTrackedSubject: return "tracked_subject";
  }
  return "any_face";
}

std::optional<Aggregation> parse_aggregation(std::string_view name) {
  if (name == "any_face") return Aggregation::kAnyFace;
  if (name == "largest_face") return Aggregation::kLargestFace;
  if (name == "tracked_subject") return Aggregation::kTrackedSubject;
  return std::nullopt;
}

void FusionConfig::validate() const {
  const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(onfocus_threshold)) {
    throw Error(ErrorCode::kInvalidConfig, "onfocus_threshold must lie in [0,1]");
  }
  if (!unit(in_frame_threshold)) {
    throw Error(ErrorCode::kInvalidConfig, "in_frame_threshold must lie in [0,1]");
  }
  if (aggregation == Aggregation::kTrackedSubject && tracked_face_id.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "tracked_subject aggregation needs a face id");
  }
}

FaceVerdict classify_face(const FaceObservation& face, const FusionConfig& config) {
  if (face.in_frame_attention >= config.in_frame_threshold) return FaceVerdict::kGatedInFrame;
  if (!face.onfocus_confidence) return FaceVerdict::kNoConfidence;
  if (*face.onfocus_confidence >= config.onfocus_threshold) return FaceVerdict::kOnfocus;
  return FaceVerdict::kBelowThreshold;
}

namespace {

// True when face a beats face b as the frame's winner.
bool better(const FaceObservation& a, std::size_t ia, const FaceObservation& b, std::size_t ib) {
  if (*a.onfocus_confidence != *b.onfocus_confidence) {
    return *a.onfocus_confidence > *b.onfocus_confidence;
  }
  if (a.bbox.area() != b.bbox.area()) return a.bbox.area() > b.bbox.area();
  return ia < ib;
}

}  // namespace

FocusDecision decide_frame(const FrameRecord& frame, const FusionConfig& config) {
  FocusDecision d;
  d.frame_index = frame.frame_index;
  const auto& faces = frame.faces;

  std::vector<std::size_t> candidates;
  switch (config.aggregation) {
    case Aggregation::kAnyFace:
      for (std::size_t i = 0; i < faces.size(); ++i) candidates.push_back(i);
      break;
    case Aggregation::kLargestFace:
      if (!faces.empty()) {
        std::size_t largest = 0;
        for (std::size_t i = 1; i < faces.size(); ++i) {
          if (faces[i].bbox.area() > faces[largest].bbox.area()) largest = i;
        }
        candidates.push_back(largest);
      }
      break;
    case Aggregation::kTrackedSubject:
      for (std::size_t i = 0; i < faces.size(); ++i) {
        if (faces[i].face_id == config.tracked_face_id) {
          candidates.push_back(i);
        }
      }
      d.tracked_subject_missing = candidates.empty();
      break;
  }

  for (const std::size_t i : candidates) {
    if (!decide_face(faces[i], config)) continue;
    if (!d.winning_face || better(faces[i], i, faces[*d.winning_face], *d.winning_face)) {
      d.winning_face = i;
    }
  }
  if (d.winning_face) {
    d.onfocus = true;
    d.winning_confidence = faces[*d.winning_face].onfocus_confidence;
  }
  return d;
}

FusedSession decide_session(const SessionFrames& session, const FusionConfig& config) {
  config.validate();
  FusedSession out;
  out.series.fps_nominal = session.fps_nominal;
  out.series.samples.reserve(session.frames.size());
  out.decisions.reserve(session.frames.size());
  for (const auto& frame : session.frames) {
    auto d = decide_frame(frame, config);
    if (d.tracked_subject_missing) ++out.tracked_subject_missing_frames;
    out.series.samples.push_back({frame.timestamp, d.onfocus, d.winning_confidence});
    out.decisions.push_back(std::move(d));
  }
  return out;
}

}  // namespace orgaze
