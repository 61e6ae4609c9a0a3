#include "orgaze/annotations.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "orgaze/error.hpp"
#include "orgaze/text.hpp"

namespace orgaze {

namespace {

constexpr std::array<std::string_view, 5> kColumns = {"time", "subject", "behavior",
                                                      "modifier", "kind"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

[[noreturn]] void bad_row(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::kMalformedRow, why, line);
}

using Key = std::tuple<std::string, std::string, std::optional<std::string>>;

Key key_of(const AnnotationEvent& e) { return {e.subject, e.behavior, e.modifier}; }

}  // namespace

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::kPoint: return "point";
    case EventKind::kStart: return "start";
    case EventKind::kStop: return "stop";
  }
  return "point";
}

AnnotationLog parse_annotations(std::istream& source) {
  AnnotationLog log;
  std::string raw;
  std::size_t number = 0;
  std::array<std::size_t, kColumns.size()> column{};
  std::size_t width = 0;
  bool have_header = false;

  while (std::getline(source, raw)) {
    ++number;
    const auto line = text::chomp(raw);
    if (!text::is_valid_utf8(line)) bad_row(number, "line is not valid UTF-8");
    if (text::trim(line).empty()) continue;
    const auto fields = text::split_csv_record(line);
    if (!fields) bad_row(number, "unterminated quote");

    if (!have_header) {
      std::vector<std::string> names;
      for (const auto& f : *fields) names.push_back(lower(text::trim(f)));
      if (!names.empty() && names[0].starts_with("\xEF\xBB\xBF")) names[0].erase(0, 3);
      for (std::size_t c = 0; c < kColumns.size(); ++c) {
        const auto it = std::find(names.begin(), names.end(), kColumns[c]);
        if (it == names.end()) {
          bad_row(number, "header lacks column '" + std::string(kColumns[c]) + "'");
        }
        column[c] = static_cast<std::size_t>(it - names.begin());
      }
      for (const auto& n : names) {
        if (std::find(kColumns.begin(), kColumns.end(), n) == kColumns.end()) {
          log.warnings.push_back("ignoring unknown column '" + n + "'");
        }
      }
      width = names.size();
      have_header = true;
      continue;
    }

    if (fields->size() != width) {
      bad_row(number, "expected " + std::to_string(width) + " fields, got " +
                          std::to_string(fields->size()));
    }
    const auto& f = *fields;
    AnnotationEvent e;
    const auto t = text::parse_double(f[column[0]]);
    if (!t || *t < 0.0) bad_row(number, "time must be a non-negative number");
    e.time = *t;
    e.subject = f[column[1]];
    e.behavior = f[column[2]];
    if (e.behavior.empty()) bad_row(number, "behavior is empty");
    if (!f[column[3]].empty()) e.modifier = f[column[3]];
    const std::string kind = lower(text::trim(f[column[4]]));
    if (kind == "point") {
      e.kind = EventKind::kPoint;
    } else if (kind == "start") {
      e.kind = EventKind::kStart;
    } else if (kind == "stop") {
      e.kind = EventKind::kStop;
    } else {
      throw Error(ErrorCode::kUnknownKind, "unknown event kind '" + f[column[4]] + "'", number);
    }
    log.events.push_back(std::move(e));
  }

  std::stable_sort(log.events.begin(), log.events.end(),
                   [](const AnnotationEvent& a, const AnnotationEvent& b) { return a.time < b.time; });
  return log;
}

AnnotationLog parse_annotations(std::string_view source) {
  std::istringstream in{std::string(source)};
  return parse_annotations(in);
}

void write_annotations(std::span<const AnnotationEvent> events, std::ostream& out) {
  out << "time,subject,behavior,modifier,kind\n";
  for (const auto& e : events) {
    out << text::format_double(e.time) << ',' << text::csv_escape(e.subject) << ','
        << text::csv_escape(e.behavior) << ',' << text::csv_escape(e.modifier.value_or(""))
        << ',' << to_string(e.kind) << '\n';
  }
}

std::vector<TaskInterval> pair_state_events(std::span<const AnnotationEvent> events,
                                            double session_end, PairingPolicy policy) {
  struct Open {
    double start;
    std::size_t order;  // position of the opening event, for output order
  };
  struct Closed {
    TaskInterval task;
    std::size_t order;
  };
  std::map<Key, Open> open;
  std::map<Key, bool> seen;
  std::vector<Closed> closed;

  auto emit = [&](const AnnotationEvent& e, double start, double end, std::size_t order) {
    start = std::max(start, 0.0);
    end = std::min(end, session_end);
    if (!(end > start)) return;
    closed.push_back({TaskInterval{e.behavior, e.subject, {start, end}, e.modifier}, order});
  };

  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.kind == EventKind::kPoint) continue;
    const Key key = key_of(e);
    const bool first_of_key = !seen[key];
    seen[key] = true;

    if (e.kind == EventKind::kStart) {
      if (open.contains(key)) {
        throw Error(ErrorCode::kNestedState,
                    "'" + e.behavior + "' started again before it stopped", i);
      }
      open.emplace(key, Open{e.time, i});
      continue;
    }

    const auto it = open.find(key);
    if (it != open.end()) {
      emit(e, it->second.start, e.time, it->second.order);
      open.erase(it);
    } else if (policy == PairingPolicy::kTruncate && first_of_key) {
      emit(e, 0.0, e.time, i);
    } else {
      throw Error(ErrorCode::kUnmatchedStop, "'" + e.behavior + "' stopped without a start", i);
    }
  }

  if (!open.empty()) {
    if (policy == PairingPolicy::kStrict) {
      const auto first = std::min_element(open.begin(), open.end(), [](const auto& a, const auto& b) {
        return a.second.order < b.second.order;
      });
      throw Error(ErrorCode::kUnmatchedStart,
                  "'" + std::get<1>(first->first) + "' never stopped", first->second.order);
    }
    if (!std::isfinite(session_end)) {
      throw Error(ErrorCode::kInvalidConfig, "truncating open states needs a finite session end");
    }
    for (const auto& [key, o] : open) emit(events[o.order], o.start, session_end, o.order);
  }

  std::sort(closed.begin(), closed.end(), [](const Closed& a, const Closed& b) {
    return a.task.interval.start < b.task.interval.start ||
           (a.task.interval.start == b.task.interval.start && a.order < b.order);
  });
  std::vector<TaskInterval> out;
  out.reserve(closed.size());
  for (auto& c : closed) out.push_back(std::move(c.task));
  return out;
}

std::vector<Interval> intervals_of(std::span<const TaskInterval> tasks, std::string_view behavior,
                                   std::optional<std::string_view> modifier) {
  std::vector<Interval> out;
  for (const auto& t : tasks) {
    if (t.behavior != behavior) continue;
    if (modifier && t.modifier != std::optional<std::string>(std::string(*modifier))) continue;
    out.push_back(t.interval);
  }
  return out;
}

}  // namespace orgaze
