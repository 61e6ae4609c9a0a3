#include "orgaze/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "orgaze/descriptive.hpp"
#include "orgaze/text.hpp"

namespace orgaze::report {

namespace {

using nlohmann::ordered_json;
using text::csv_escape;
using text::format_double;
using text::format_fixed;

std::string opt(std::optional<double> v) { return v ? format_double(*v) : ""; }

ordered_json opt_json(std::optional<double> v) { return v ? ordered_json(*v) : ordered_json(); }

std::string pad(const std::string& s, std::size_t width) {
  // count code points so "±" does not skew the columns
  std::size_t shown = 0;
  for (const unsigned char c : s) shown += (c & 0xC0) != 0x80 ? 1 : 0;
  return s + std::string(width > shown ? width - shown : 0, ' ');
}

std::size_t display_width(const std::string& s) {
  std::size_t shown = 0;
  for (const unsigned char c : s) shown += (c & 0xC0) != 0x80 ? 1 : 0;
  return shown;
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], display_width(row[c]));
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c > 0) line += " | ";
      line += pad(rows[r][c], widths[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
    if (r == 0) {
      std::string rule;
      for (std::size_t c = 0; c < widths.size(); ++c) {
        if (c > 0) rule += "-+-";
        rule += std::string(widths[c], '-');
      }
      out << rule << '\n';
    }
  }
  return out.str();
}

std::string p_cell(std::optional<double> p) { return p ? format_fixed(*p, 4) : "NA"; }

const MetricSummary* find_metric(const MonitorSummary& m, const std::string& name) {
  for (const auto& s : m.metrics) {
    if (s.metric == name) return &s;
  }
  return nullptr;
}

std::string accuracy_cell(const AgreementReport& r) {
  return mean_sd(100.0 * r.mean_accuracy,
                 r.sd_accuracy ? std::optional<double>(100.0 * *r.sd_accuracy) : std::nullopt, 2,
                 true);
}

std::string f1_cell(const AgreementReport& r) {
  return r.mean_f1 ? mean_sd(*r.mean_f1, r.sd_f1, 2) : "NA";
}

}  // namespace

std::string mean_sd(double mean, std::optional<double> sd, int decimals, bool percent) {
  const std::string unit = percent ? "%" : "";
  return format_fixed(mean, decimals) + unit + " ± " +
         (sd ? format_fixed(*sd, decimals) + unit : std::string("NA"));
}

std::string optional_number(std::optional<double> v) { return opt(v); }

std::string agreement_csv(std::span<const AgreementRow> rows) {
  std::ostringstream out;
  out << "model,dataset,accuracy,f1\n";
  for (const auto& r : rows) {
    out << csv_escape(r.model) << ',' << csv_escape(r.dataset) << ','
        << csv_escape(accuracy_cell(r.report)) << ',' << csv_escape(f1_cell(r.report)) << '\n';
  }
  return out.str();
}

std::string agreement_text(std::span<const AgreementRow> rows) {
  std::vector<std::vector<std::string>> table = {{"Model", "Dataset", "Accuracy", "F1-Score"}};
  for (const auto& r : rows) {
    table.push_back({r.model, r.dataset, accuracy_cell(r.report), f1_cell(r.report)});
  }
  return render_table(table);
}

std::string folds_csv(const AgreementReport& report) {
  std::ostringstream out;
  out << "fold,accuracy,f1\n";
  for (std::size_t i = 0; i < report.per_fold.size(); ++i) {
    out << i + 1 << ',' << format_double(report.per_fold[i].accuracy) << ','
        << opt(report.per_fold[i].f1) << '\n';
  }
  return out.str();
}

std::string events_csv(std::span<const GazeEvent> events) {
  std::ostringstream out;
  out << "start,end,duration,n_frames,mean_confidence\n";
  for (const auto& e : events) {
    out << format_double(e.interval.start) << ',' << format_double(e.interval.end) << ','
        << format_double(e.duration()) << ',' << e.n_frames << ',' << opt(e.mean_confidence)
        << '\n';
  }
  return out.str();
}

std::string events_json(std::span<const GazeEvent> events) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : events) {
    arr.push_back({{"start", e.interval.start},
                   {"end", e.interval.end},
                   {"duration", e.duration()},
                   {"n_frames", e.n_frames},
                   {"mean_confidence", opt_json(e.mean_confidence)}});
  }
  return arr.dump(2) + "\n";
}

std::string va_metrics_csv(const std::vector<std::pair<std::string, VAMetrics>>& rows) {
  std::ostringstream out;
  out << "source,phase_start,phase_end,n_events,frequency_per_5min,mean_duration_s,"
         "sd_duration_s,total_time_s,total_time_pct\n";
  for (const auto& [source, m] : rows) {
    out << csv_escape(source) << ',' << format_double(m.phase.start) << ','
        << format_double(m.phase.end) << ',' << m.n_events << ','
        << format_double(m.frequency_per_5min) << ',' << opt(m.mean_duration_s) << ','
        << opt(m.sd_duration_s) << ',' << format_double(m.total_time_s) << ','
        << format_double(m.total_time_pct) << '\n';
  }
  return out.str();
}

std::string va_metrics_json(const std::vector<std::pair<std::string, VAMetrics>>& rows) {
  ordered_json doc = ordered_json::object();
  for (const auto& [source, m] : rows) {
    doc[source] = {{"phase", {m.phase.start, m.phase.end}},
                   {"n_events", m.n_events},
                   {"frequency_per_5min", m.frequency_per_5min},
                   {"mean_duration_s", opt_json(m.mean_duration_s)},
                   {"sd_duration_s", opt_json(m.sd_duration_s)},
                   {"total_time_s", m.total_time_s},
                   {"total_time_pct", m.total_time_pct}};
  }
  return doc.dump(2) + "\n";
}

std::string overlap_csv(std::span<const OverlapRow> rows) {
  std::ostringstream out;
  out << "behavior,n_intervals,task_time_s,overlap_s,overlap_pct\n";
  for (const auto& r : rows) {
    out << csv_escape(r.behavior) << ',' << r.n_intervals << ',' << format_double(r.task_time_s)
        << ',' << format_double(r.overlap_s) << ',' << format_double(r.overlap_pct) << '\n';
  }
  return out.str();
}

std::string overlap_json(std::span<const OverlapRow> rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"behavior", r.behavior},
                   {"n_intervals", r.n_intervals},
                   {"task_time_s", r.task_time_s},
                   {"overlap_s", r.overlap_s},
                   {"overlap_pct", r.overlap_pct}});
  }
  return arr.dump(2) + "\n";
}

MetricSummary summarize_metric(std::string metric, std::span<const std::optional<double>> framework,
                               std::span<const std::optional<double>> human) {
  MetricSummary s;
  s.metric = std::move(metric);
  std::vector<double> fw, hu;
  const std::size_t n = std::min(framework.size(), human.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (framework[i] && human[i]) {
      fw.push_back(*framework[i]);
      hu.push_back(*human[i]);
    }
  }
  s.n_pairs = fw.size();
  s.framework_mean = mean_of(fw).value_or(0.0);
  s.framework_sd = sample_sd(fw);
  s.human_mean = mean_of(hu).value_or(0.0);
  s.human_sd = sample_sd(hu);
  s.mean_delta = s.human_mean - s.framework_mean;
  if (s.n_pairs >= 2) {
    s.p_paired_t = paired_compare(fw, hu, PairedTest::kPairedT).p_value;
    s.p_wilcoxon = paired_compare(fw, hu, PairedTest::kWilcoxonSignedRank).p_value;
  }
  return s;
}

MonitorSummary summarize_monitor(std::string monitor, std::span<const CrossReference> sessions) {
  std::vector<std::optional<double>> ff, hf, fd, hd, ft, ht;
  for (const auto& x : sessions) {
    ff.emplace_back(x.framework.frequency_per_5min);
    hf.emplace_back(x.human.frequency_per_5min);
    fd.push_back(x.framework.mean_duration_s);
    hd.push_back(x.human.mean_duration_s);
    ft.emplace_back(x.framework.total_time_pct);
    ht.emplace_back(x.human.total_time_pct);
  }
  MonitorSummary m;
  m.monitor = std::move(monitor);
  m.metrics.push_back(summarize_metric("frequency_per_5min", ff, hf));
  m.metrics.push_back(summarize_metric("mean_duration_s", fd, hd));
  m.metrics.push_back(summarize_metric("total_time_pct", ft, ht));
  return m;
}

std::string comparison_csv(std::span<const MonitorSummary> monitors) {
  std::ostringstream out;
  out << "monitor,metric,n_pairs,framework_mean,framework_sd,human_mean,human_sd,mean_delta,"
         "p_paired_t,p_wilcoxon\n";
  for (const auto& m : monitors) {
    for (const auto& s : m.metrics) {
      out << csv_escape(m.monitor) << ',' << s.metric << ',' << s.n_pairs << ','
          << format_double(s.framework_mean) << ',' << opt(s.framework_sd) << ','
          << format_double(s.human_mean) << ',' << opt(s.human_sd) << ','
          << format_double(s.mean_delta) << ',' << opt(s.p_paired_t) << ','
          << opt(s.p_wilcoxon) << '\n';
    }
  }
  return out.str();
}

std::string va_comparison_text(std::span<const MonitorSummary> monitors) {
  std::vector<std::vector<std::string>> table = {
      {"Monitor", "Detector", "Freq. [(5 min)^-1]", "Duration [s]", "Total time (%)",
       "P-value (paired t)", "P-value (Wilcoxon)"}};
  for (const auto& m : monitors) {
    const auto* freq = find_metric(m, "frequency_per_5min");
    const auto* dur = find_metric(m, "mean_duration_s");
    const auto* total = find_metric(m, "total_time_pct");
    if (!freq || !dur || !total) continue;
    table.push_back({m.monitor, "Framework", mean_sd(freq->framework_mean, freq->framework_sd, 2),
                     mean_sd(dur->framework_mean, dur->framework_sd, 2),
                     mean_sd(total->framework_mean, total->framework_sd, 2, true),
                     p_cell(total->p_paired_t), p_cell(total->p_wilcoxon)});
    table.push_back({"", "Human observer", mean_sd(freq->human_mean, freq->human_sd, 2),
                     mean_sd(dur->human_mean, dur->human_sd, 2),
                     mean_sd(total->human_mean, total->human_sd, 2, true), "", ""});
  }
  return render_table(table);
}

std::string task_comparison_text(std::span<const MonitorSummary> monitors,
                                 const std::string& context_behavior) {
  std::vector<std::vector<std::string>> table = {
      {"Monitor", "Detector", "Total time during " + context_behavior + " (%)",
       "P-value (paired t)", "P-value (Wilcoxon)"}};
  for (const auto& m : monitors) {
    if (m.metrics.empty()) continue;
    const auto& s = m.metrics.front();
    table.push_back({m.monitor, "Framework", mean_sd(s.framework_mean, s.framework_sd, 2, true),
                     p_cell(s.p_paired_t), p_cell(s.p_wilcoxon)});
    table.push_back({"", "Human observer", mean_sd(s.human_mean, s.human_sd, 2, true), "", ""});
  }
  return render_table(table);
}

Timeline layout_timeline(std::span<const TaskInterval> tasks, std::span<const GazeEvent> gaze,
                         const std::string& gaze_label, const Interval& axis,
                         const TimelineStyle& style) {
  Timeline tl;
  tl.axis = axis;
  tl.style = style;

  std::vector<const TaskInterval*> ordered;
  for (const auto& t : tasks) ordered.push_back(&t);
  std::stable_sort(ordered.begin(), ordered.end(), [](const TaskInterval* a, const TaskInterval* b) {
    return a->interval.start < b->interval.start;
  });

  // label -> rows it occupies, each row remembering where its last bar ends
  struct LabelRows {
    std::vector<std::pair<std::size_t, double>> rows;
  };
  std::map<std::string, LabelRows> by_label;

  const double span = axis.duration() > 0.0 ? axis.duration() : 1.0;
  auto x_of = [&](double t) { return style.label_width + (t - axis.start) / span * style.plot_width; };
  auto add_bar = [&](const std::string& track, const std::string& label, std::size_t row,
                     const Interval& iv) {
    TimelineBar b;
    b.track = track;
    b.label = label;
    b.row = row;
    b.interval = iv;
    b.x = x_of(iv.start);
    b.width = x_of(iv.end) - b.x;
    b.y = style.top + static_cast<double>(row) * style.lane_height +
          (style.lane_height - style.bar_height) / 2.0;
    b.height = style.bar_height;
    tl.bars.push_back(std::move(b));
  };

  for (const TaskInterval* t : ordered) {
    const std::string label = t->modifier ? t->behavior + " (" + *t->modifier + ")" : t->behavior;
    auto& rows = by_label[label].rows;
    std::size_t row = tl.row_labels.size();
    bool found = false;
    for (auto& [r, last_end] : rows) {
      if (t->interval.start >= last_end) {
        row = r;
        last_end = t->interval.end;
        found = true;
        break;
      }
    }
    if (!found) {
      tl.row_labels.push_back(label);
      rows.emplace_back(row, t->interval.end);
    }
    add_bar("task", label, row, t->interval);
  }

  const std::size_t gaze_row = tl.row_labels.size();
  tl.row_labels.push_back(gaze_label);
  for (const auto& e : gaze) add_bar("gaze", gaze_label, gaze_row, e.interval);
  return tl;
}

std::string timeline_csv(const Timeline& timeline) {
  std::ostringstream out;
  out << "track,behavior,start,end,row\n";
  for (const auto& b : timeline.bars) {
    out << b.track << ',' << csv_escape(b.label) << ',' << format_double(b.interval.start) << ','
        << format_double(b.interval.end) << ',' << b.row << '\n';
  }
  return out.str();
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string timeline_svg(const Timeline& tl) {
  const auto& st = tl.style;
  const double width = st.label_width + st.plot_width + 20.0;
  const double height =
      st.top + static_cast<double>(tl.row_labels.size()) * st.lane_height + st.bottom;
  auto f3 = [](double v) { return format_fixed(v, 3); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f3(width) << "\" height=\""
      << f3(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t r = 0; r < tl.row_labels.size(); ++r) {
    const double y = st.top + static_cast<double>(r) * st.lane_height + st.lane_height / 2.0 + 4.0;
    out << "  <text x=\"4.000\" y=\"" << f3(y) << "\">" << xml_escape(tl.row_labels[r])
        << "</text>\n";
  }
  const double axis_y = st.top + static_cast<double>(tl.row_labels.size()) * st.lane_height;
  out << "  <line x1=\"" << f3(st.label_width) << "\" y1=\"" << f3(axis_y) << "\" x2=\""
      << f3(st.label_width + st.plot_width) << "\" y2=\"" << f3(axis_y)
      << "\" stroke=\"black\"/>\n";
  out << "  <text x=\"" << f3(st.label_width) << "\" y=\"" << f3(axis_y + 16.0) << "\">"
      << format_fixed(tl.axis.start, 1) << " s</text>\n";
  out << "  <text x=\"" << f3(st.label_width + st.plot_width) << "\" y=\"" << f3(axis_y + 16.0)
      << "\" text-anchor=\"end\">" << format_fixed(tl.axis.end, 1) << " s</text>\n";
  for (const auto& b : tl.bars) {
    out << "  <rect class=\"" << b.track << "\" x=\"" << f3(b.x) << "\" y=\"" << f3(b.y)
        << "\" width=\"" << f3(b.width) << "\" height=\"" << f3(b.height) << "\" fill=\""
        << (b.track == "gaze" ? "#d62728" : "#1f77b4") << "\"><title>" << xml_escape(b.label)
        << " " << format_double(b.interval.start) << "-" << format_double(b.interval.end)
        << " s</title></rect>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace orgaze::report
