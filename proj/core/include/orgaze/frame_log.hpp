#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orgaze/interval.hpp"

namespace orgaze {

/// Normalized image rectangle; every component lies in [0,1], w and h > 0.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const noexcept { return w * h; }
  bool operator==(const BoundingBox&) const = default;
};

/// One detected face and the scores the upstream models produced for it.
struct FaceObservation {
  std::optional<std::string> face_id;
  BoundingBox bbox;
  double detector_confidence = 0.0;
  /// Scalar from the spatiotemporal gaze model; high means the attention
  /// target is an object inside the image.
  double in_frame_attention = 0.0;
  /// Eye-context onfocus score. Absent when the upstream gate skipped it.
  std::optional<double> onfocus_confidence;

  bool operator==(const FaceObservation&) const = default;
};

struct FrameRecord {
  std::uint64_t frame_index = 0;
  double timestamp = 0.0;  // seconds from session start
  std::vector<FaceObservation> faces;
  std::string camera_id;

  bool operator==(const FrameRecord&) const = default;
};

struct SessionFrames {
  std::string session_id;
  std::string camera_id;
  double fps_nominal = 25.0;
  std::vector<FrameRecord> frames;
  std::optional<Interval> phase;

  bool operator==(const SessionFrames&) const = default;

  double frame_period() const noexcept { return 1.0 / fps_nominal; }
};

enum class LogFormat { kJsonl, kCsv };

inline constexpr std::string_view kFrameLogSchemaVersion = "1";

/// Parses a frame log. Throws orgaze::Error with one of MalformedRecord,
/// NonMonotonicTimestamp, MissingMetadata or EmptyLog; the error location is
/// the 1-based physical line number.
SessionFrames parse_frame_log(std::istream& source, LogFormat format);
SessionFrames parse_frame_log(std::string_view source, LogFormat format);

/// Guesses the format from a file extension (".csv" → CSV, otherwise JSONL).
LogFormat format_from_path(std::string_view path);

void write_frame_log(const SessionFrames& session, std::ostream& out,
                     LogFormat format = LogFormat::kJsonl);
std::string serialize_frame_log(const SessionFrames& session,
                                LogFormat format = LogFormat::kJsonl);

/// Reason string when `face` breaks a field invariant.
std::optional<std::string> face_violation(const FaceObservation& face);

/// Analysis window: the declared phase, or [first timestamp, last timestamp
/// + one frame period) when none is declared.
Interval analysis_phase(const SessionFrames& session);

struct FrameGap {
  std::uint64_t after_frame_index = 0;
  double from_t = 0.0;
  double to_t = 0.0;
  double delta_s = 0.0;    // to_t - from_t
  double missing_s = 0.0;  // delta_s - one frame period
};

struct ConfidenceSummary {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  /// Ten equal bins over [0,1]; 1.0 falls into the last bin.
  std::array<std::size_t, 10> histogram{};
};

struct ValidationReport {
  std::size_t n_frames = 0;
  std::size_t n_faces = 0;
  /// Consecutive timestamp deltas larger than two nominal frame periods.
  std::vector<FrameGap> gaps;
  std::size_t zero_face_frames = 0;
  double zero_face_fraction = 0.0;
  double median_frame_interval_s = 0.0;
  ConfidenceSummary detector_confidence;
  ConfidenceSummary in_frame_attention;
  ConfidenceSummary onfocus_confidence;
  std::size_t faces_without_onfocus = 0;
  std::vector<std::string> warnings;
};

ValidationReport validate_session(const SessionFrames& session);

}  // namespace orgaze
