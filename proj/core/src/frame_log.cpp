#include "orgaze/frame_log.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "orgaze/error.hpp"
#include "orgaze/text.hpp"

namespace orgaze {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kCsvHeader =
    "frame_index,t,face_id,x,y,w,h,det_conf,in_frame,onfocus_conf";

// Tolerates rounding in phase ends computed as n / fps.
constexpr double kPhaseSlack = 1e-6;

bool unit(double v) { return v >= 0.0 && v <= 1.0; }

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::kMalformedRecord, why, line);
}

struct Line {
  std::size_t number;
  std::string text;
};

std::vector<Line> read_lines(std::istream& source) {
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(source, raw)) {
    ++number;
    const auto body = text::chomp(raw);
    if (!text::is_valid_utf8(body)) malformed(number, "line is not valid UTF-8");
    if (text::trim(body).empty()) continue;
    lines.push_back({number, std::string(body)});
  }
  return lines;
}

// Shared post-parse checks: ordering, phase bounds, nonempty.
class SessionBuilder {
 public:
  explicit SessionBuilder(SessionFrames header, std::size_t header_line)
      : session_(std::move(header)), header_line_(header_line) {}

  void add(FrameRecord frame, std::size_t line) {
    if (const auto* prev = session_.frames.empty() ? nullptr : &session_.frames.back()) {
      if (!(frame.timestamp > prev->timestamp)) {
        throw Error(ErrorCode::kNonMonotonicTimestamp,
                    "timestamp " + text::format_double(frame.timestamp) +
                        " does not exceed previous " +
                        text::format_double(prev->timestamp),
                    line);
      }
      if (!(frame.frame_index > prev->frame_index)) {
        malformed(line, "frame_index " + std::to_string(frame.frame_index) +
                            " does not exceed previous " +
                            std::to_string(prev->frame_index));
      }
    }
    session_.frames.push_back(std::move(frame));
  }

  SessionFrames finish() && {
    if (session_.frames.empty()) {
      throw Error(ErrorCode::kEmptyLog, "log contains no frame records");
    }
    if (session_.phase) {
      const Interval bounds = {session_.frames.front().timestamp,
                               session_.frames.back().timestamp +
                                   session_.frame_period()};
      const auto& p = *session_.phase;
      if (p.start < bounds.start - kPhaseSlack || p.end > bounds.end + kPhaseSlack) {
        malformed(header_line_, "phase lies outside the recorded time span");
      }
    }
    return std::move(session_);
  }

 private:
  SessionFrames session_;
  std::size_t header_line_;
};

void check_phase(const Interval& p, std::size_t line) {
  if (!(p.start >= 0.0) || !(p.end >= p.start)) {
    malformed(line, "phase must satisfy 0 <= start <= end");
  }
}

// ---- JSON lines ----------------------------------------------------------

double number_field(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) malformed(line, std::string("missing field '") + key + "'");
  if (!it->is_number()) malformed(line, std::string("field '") + key + "' is not a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) malformed(line, std::string("field '") + key + "' is not finite");
  return v;
}

json parse_json_line(const Line& line) {
  json value;
  try {
    value = json::parse(line.text);
  } catch (const json::parse_error& e) {
    malformed(line.number, std::string("invalid JSON: ") + e.what());
  }
  if (!value.is_object()) malformed(line.number, "record is not a JSON object");
  return value;
}

SessionFrames parse_jsonl_header(const Line& line) {
  const json meta = parse_json_line(line);
  auto require_string = [&](const char* key) -> std::string {
    const auto it = meta.find(key);
    if (it == meta.end()) {
      throw Error(ErrorCode::kMissingMetadata,
                  std::string("metadata field '") + key + "' missing", line.number);
    }
    if (!it->is_string()) malformed(line.number, std::string("metadata '") + key + "' is not a string");
    return it->get<std::string>();
  };

  SessionFrames s;
  const std::string version = require_string("schema_version");
  s.session_id = require_string("session_id");
  s.camera_id = require_string("camera_id");
  if (!meta.contains("fps")) {
    throw Error(ErrorCode::kMissingMetadata, "metadata field 'fps' missing", line.number);
  }
  s.fps_nominal = number_field(meta, "fps", line.number);
  if (version != kFrameLogSchemaVersion) {
    malformed(line.number, "unsupported schema_version '" + version + "'");
  }
  if (!(s.fps_nominal > 0.0)) malformed(line.number, "fps must be positive");

  if (const auto it = meta.find("phase"); it != meta.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
      malformed(line.number, "phase must be [start, end]");
    }
    s.phase = Interval{(*it)[0].get<double>(), (*it)[1].get<double>()};
    check_phase(*s.phase, line.number);
  }
  return s;
}

FaceObservation parse_json_face(const json& f, std::size_t line) {
  if (!f.is_object()) malformed(line, "face is not an object");
  FaceObservation face;
  if (const auto it = f.find("id"); it != f.end() && !it->is_null()) {
    if (!it->is_string()) malformed(line, "face id is not a string");
    face.face_id = it->get<std::string>();
  }
  const auto bbox = f.find("bbox");
  if (bbox == f.end() || !bbox->is_array() || bbox->size() != 4) {
    malformed(line, "bbox must be [x, y, w, h]");
  }
  std::array<double, 4> b{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(*bbox)[i].is_number()) malformed(line, "bbox entries must be numbers");
    b[i] = (*bbox)[i].get<double>();
  }
  face.bbox = {b[0], b[1], b[2], b[3]};
  face.detector_confidence = number_field(f, "det_conf", line);
  face.in_frame_attention = number_field(f, "in_frame", line);
  if (const auto it = f.find("onfocus_conf"); it != f.end() && !it->is_null()) {
    face.onfocus_confidence = number_field(f, "onfocus_conf", line);
  }
  if (auto why = face_violation(face)) malformed(line, *why);
  return face;
}

FrameRecord parse_json_frame(const Line& line, const std::string& camera_id) {
  const json obj = parse_json_line(line);
  FrameRecord frame;
  const auto idx = obj.find("frame_index");
  if (idx == obj.end() || !idx->is_number_unsigned()) {
    malformed(line.number, "frame_index must be a non-negative integer");
  }
  frame.frame_index = idx->get<std::uint64_t>();
  frame.timestamp = number_field(obj, "t", line.number);
  if (frame.timestamp < 0.0) malformed(line.number, "timestamp is negative");

  frame.camera_id = camera_id;
  if (const auto it = obj.find("camera_id"); it != obj.end()) {
    if (!it->is_string() || it->get<std::string>() != camera_id) {
      malformed(line.number, "frame camera_id differs from the session camera");
    }
  }

  const auto faces = obj.find("faces");
  if (faces == obj.end() || !faces->is_array()) malformed(line.number, "faces must be an array");
  frame.faces.reserve(faces->size());
  for (const auto& f : *faces) frame.faces.push_back(parse_json_face(f, line.number));
  return frame;
}

SessionFrames parse_jsonl(const std::vector<Line>& lines) {
  SessionFrames header = parse_jsonl_header(lines.front());
  const std::string camera = header.camera_id;
  SessionBuilder builder(std::move(header), lines.front().number);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    builder.add(parse_json_frame(lines[i], camera), lines[i].number);
  }
  return std::move(builder).finish();
}

// ---- CSV -----------------------------------------------------------------

enum CsvColumn { kIndex, kTime, kFaceId, kX, kY, kW, kH, kDet, kInFrame, kOnfocus, kColumns };

SessionFrames parse_csv(const std::vector<Line>& lines) {
  std::map<std::string, std::string, std::less<>> meta;
  std::size_t pos = 0;
  for (; pos < lines.size() && text::trim(lines[pos].text).starts_with('#'); ++pos) {
    auto body = text::trim(text::trim(lines[pos].text).substr(1));
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) continue;  // free-form comment
    meta[std::string(text::trim(body.substr(0, eq)))] = std::string(text::trim(body.substr(eq + 1)));
  }
  const std::size_t meta_line = lines.front().number;

  SessionFrames s;
  for (const char* key : {"session_id", "camera_id", "fps"}) {
    if (!meta.contains(key)) {
      throw Error(ErrorCode::kMissingMetadata, std::string("metadata '") + key + "' missing", meta_line);
    }
  }
  s.session_id = meta["session_id"];
  s.camera_id = meta["camera_id"];
  const auto fps = text::parse_double(meta["fps"]);
  if (!fps || !(*fps > 0.0)) malformed(meta_line, "fps must be a positive number");
  s.fps_nominal = *fps;
  if (const auto it = meta.find("schema_version");
      it != meta.end() && it->second != kFrameLogSchemaVersion) {
    malformed(meta_line, "unsupported schema_version '" + it->second + "'");
  }
  if (const auto it = meta.find("phase"); it != meta.end()) {
    const auto parts = text::split_csv_record(it->second);
    if (!parts || parts->size() != 2) malformed(meta_line, "phase must be 'start,end'");
    const auto a = text::parse_double((*parts)[0]);
    const auto b = text::parse_double((*parts)[1]);
    if (!a || !b) malformed(meta_line, "phase must be 'start,end'");
    s.phase = Interval{*a, *b};
    check_phase(*s.phase, meta_line);
  }

  if (pos >= lines.size()) throw Error(ErrorCode::kEmptyLog, "log contains no frame records");
  if (text::trim(lines[pos].text) != kCsvHeader) {
    malformed(lines[pos].number, "expected header '" + std::string(kCsvHeader) + "'");
  }
  ++pos;

  const std::string camera = s.camera_id;
  SessionBuilder builder(std::move(s), meta_line);
  std::optional<FrameRecord> pending;
  std::size_t pending_line = 0;
  bool pending_empty_marker = false;

  for (; pos < lines.size(); ++pos) {
    const auto& line = lines[pos];
    const auto fields = text::split_csv_record(line.text);
    if (!fields) malformed(line.number, "unterminated quote");
    if (fields->size() != kColumns) {
      malformed(line.number, "expected " + std::to_string(kColumns) + " fields, got " +
                                 std::to_string(fields->size()));
    }
    const auto& f = *fields;
    const auto index = text::parse_uint(f[kIndex]);
    if (!index) malformed(line.number, "frame_index must be a non-negative integer");
    const auto t = text::parse_double(f[kTime]);
    if (!t || *t < 0.0) malformed(line.number, "t must be a non-negative number");

    const bool no_face = std::all_of(f.begin() + kFaceId, f.end(),
                                     [](const std::string& v) { return v.empty(); });
    const bool continues = pending && pending->frame_index == *index;
    if (continues) {
      if (pending->timestamp != *t) malformed(line.number, "rows of one frame disagree on t");
      if (no_face || pending_empty_marker) {
        malformed(line.number, "frame mixes an empty-frame row with face rows");
      }
    } else {
      if (pending) builder.add(std::move(*pending), pending_line);
      pending = FrameRecord{*index, *t, {}, camera};
      pending_line = line.number;
      pending_empty_marker = no_face;
    }
    if (no_face) continue;

    FaceObservation face;
    if (!f[kFaceId].empty()) face.face_id = f[kFaceId];
    auto num = [&](CsvColumn c, const char* name) {
      const auto v = text::parse_double(f[c]);
      if (!v) malformed(line.number, std::string("field '") + name + "' is not a number");
      return *v;
    };
    face.bbox = {num(kX, "x"), num(kY, "y"), num(kW, "w"), num(kH, "h")};
    face.detector_confidence = num(kDet, "det_conf");
    face.in_frame_attention = num(kInFrame, "in_frame");
    if (!f[kOnfocus].empty()) face.onfocus_confidence = num(kOnfocus, "onfocus_conf");
    if (auto why = face_violation(face)) malformed(line.number, *why);
    pending->faces.push_back(std::move(face));
  }
  if (pending) builder.add(std::move(*pending), pending_line);
  return std::move(builder).finish();
}

void write_jsonl(const SessionFrames& s, std::ostream& out) {
  ordered_json meta;
  meta["schema_version"] = kFrameLogSchemaVersion;
  meta["session_id"] = s.session_id;
  meta["camera_id"] = s.camera_id;
  meta["fps"] = s.fps_nominal;
  if (s.phase) meta["phase"] = {s.phase->start, s.phase->end};
  out << meta.dump() << '\n';

  for (const auto& frame : s.frames) {
    ordered_json obj;
    obj["frame_index"] = frame.frame_index;
    obj["t"] = frame.timestamp;
    obj["faces"] = ordered_json::array();
    for (const auto& face : frame.faces) {
      ordered_json f;
      if (face.face_id) f["id"] = *face.face_id;
      f["bbox"] = {face.bbox.x, face.bbox.y, face.bbox.w, face.bbox.h};
      f["det_conf"] = face.detector_confidence;
      f["in_frame"] = face.in_frame_attention;
      if (face.onfocus_confidence) f["onfocus_conf"] = *face.onfocus_confidence;
      obj["faces"].push_back(std::move(f));
    }
    out << obj.dump() << '\n';
  }
}

void write_csv(const SessionFrames& s, std::ostream& out) {
  using text::format_double;
  out << "# schema_version=" << kFrameLogSchemaVersion << '\n'
      << "# session_id=" << s.session_id << '\n'
      << "# camera_id=" << s.camera_id << '\n'
      << "# fps=" << format_double(s.fps_nominal) << '\n';
  if (s.phase) {
    out << "# phase=" << format_double(s.phase->start) << ','
        << format_double(s.phase->end) << '\n';
  }
  out << kCsvHeader << '\n';
  for (const auto& frame : s.frames) {
    const std::string prefix =
        std::to_string(frame.frame_index) + ',' + format_double(frame.timestamp) + ',';
    if (frame.faces.empty()) {
      out << prefix << ",,,,,,,\n";
      continue;
    }
    for (const auto& face : frame.faces) {
      out << prefix << text::csv_escape(face.face_id.value_or("")) << ','
          << format_double(face.bbox.x) << ',' << format_double(face.bbox.y) << ','
          << format_double(face.bbox.w) << ',' << format_double(face.bbox.h) << ','
          << format_double(face.detector_confidence) << ','
          << format_double(face.in_frame_attention) << ','
          << (face.onfocus_confidence ? format_double(*face.onfocus_confidence) : "")
          << '\n';
    }
  }
}

ConfidenceSummary summarize(const std::vector<double>& values) {
  ConfidenceSummary out;
  out.count = values.size();
  if (values.empty()) return out;
  out.min = *std::min_element(values.begin(), values.end());
  out.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (const double v : values) {
    sum += v;
    const auto bin = std::min<std::size_t>(9, static_cast<std::size_t>(v * 10.0));
    ++out.histogram[bin];
  }
  out.mean = sum / static_cast<double>(values.size());
  return out;
}

}  // namespace

std::optional<std::string> face_violation(const FaceObservation& face) {
  const auto& b = face.bbox;
  if (!(unit(b.x) && unit(b.y) && unit(b.w) && unit(b.h))) {
    return "bbox components must lie in [0,1]";
  }
  if (!(b.w > 0.0 && b.h > 0.0)) return "bbox width and height must be positive";
  if (!unit(face.detector_confidence)) return "det_conf out of range [0,1]";
  if (!unit(face.in_frame_attention)) return "in_frame out of range [0,1]";
  if (face.onfocus_confidence && !unit(*face.onfocus_confidence)) {
    return "onfocus_conf out of range [0,1]";
  }
  return std::nullopt;
}

SessionFrames parse_frame_log(std::istream& source, LogFormat format) {
  const auto lines = read_lines(source);
  if (lines.empty()) throw Error(ErrorCode::kEmptyLog, "log is empty");
  return format == LogFormat::kJsonl ? parse_jsonl(lines) : parse_csv(lines);
}

SessionFrames parse_frame_log(std::string_view source, LogFormat format) {
  std::istringstream in{std::string(source)};
  return parse_frame_log(in, format);
}

LogFormat format_from_path(std::string_view path) {
  return path.ends_with(".csv") ? LogFormat::kCsv : LogFormat::kJsonl;
}

void write_frame_log(const SessionFrames& session, std::ostream& out, LogFormat format) {
  if (format == LogFormat::kJsonl) {
    write_jsonl(session, out);
  } else {
    write_csv(session, out);
  }
}

std::string serialize_frame_log(const SessionFrames& session, LogFormat format) {
  std::ostringstream out;
  write_frame_log(session, out, format);
  return out.str();
}

Interval analysis_phase(const SessionFrames& session) {
  if (session.phase) return *session.phase;
  if (session.frames.empty()) return {};
  return {session.frames.front().timestamp,
          session.frames.back().timestamp + session.frame_period()};
}

ValidationReport validate_session(const SessionFrames& session) {
  ValidationReport r;
  r.n_frames = session.frames.size();
  const double period = session.frame_period();

  std::vector<double> det, in_frame, onfocus, deltas;
  for (std::size_t i = 0; i < session.frames.size(); ++i) {
    const auto& frame = session.frames[i];
    if (frame.faces.empty()) ++r.zero_face_frames;
    for (const auto& face : frame.faces) {
      ++r.n_faces;
      det.push_back(face.detector_confidence);
      in_frame.push_back(face.in_frame_attention);
      if (face.onfocus_confidence) {
        onfocus.push_back(*face.onfocus_confidence);
      } else {
        ++r.faces_without_onfocus;
      }
    }
    if (i == 0) continue;
    const auto& prev = session.frames[i - 1];
    const double delta = frame.timestamp - prev.timestamp;
    deltas.push_back(delta);
    if (delta > 2.0 * period) {
      r.gaps.push_back({prev.frame_index, prev.timestamp, frame.timestamp, delta, delta - period});
    }
  }
  if (r.n_frames > 0) {
    r.zero_face_fraction =
        static_cast<double>(r.zero_face_frames) / static_cast<double>(r.n_frames);
  }
  r.detector_confidence = summarize(det);
  r.in_frame_attention = summarize(in_frame);
  r.onfocus_confidence = summarize(onfocus);

  if (!deltas.empty()) {
    const auto mid = deltas.begin() + static_cast<std::ptrdiff_t>(deltas.size() / 2);
    std::nth_element(deltas.begin(), mid, deltas.end());
    r.median_frame_interval_s = *mid;
    if (std::abs(r.median_frame_interval_s - period) > 0.1 * period) {
      r.warnings.push_back("median frame interval " + text::format_fixed(r.median_frame_interval_s, 4) +
                           " s disagrees with nominal fps " + text::format_double(session.fps_nominal));
    }
  }
  for (const auto& gap : r.gaps) {
    r.warnings.push_back("gap of " + text::format_fixed(gap.missing_s, 3) + " s after frame " +
                         std::to_string(gap.after_frame_index));
  }
  return r;
}

}  // namespace orgaze
