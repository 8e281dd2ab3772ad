#include "ictal/events.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "ictal/error.hpp"
#include "ictal/parallel.hpp"

namespace ictal {
namespace {

constexpr std::string_view kModule = "events";

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

void check_aligned(std::span<const std::uint8_t> binary, const PredictionStream& stream) {
  if (binary.size() != stream.size()) {
    fail(ErrorKind::Shape, "binary sequence has " + std::to_string(binary.size()) + " entries, stream has " +
                               std::to_string(stream.size()));
  }
}

bool adjacent(const PredictionStream& s, std::size_t a, std::size_t b) {
  return (s.entries[b].time - s.entries[a].time).count() == s.step_s;
}

}  // namespace

std::vector<std::uint8_t> binarize(const PredictionStream& stream, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) fail(ErrorKind::Validation, "threshold must lie in [0,1]");
  std::vector<std::uint8_t> out(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) out[i] = stream.entries[i].probability >= threshold ? 1 : 0;
  return out;
}

std::vector<std::uint8_t> remove_isolated(std::span<const std::uint8_t> binary, const PredictionStream& stream) {
  check_aligned(binary, stream);
  std::vector<std::uint8_t> out(binary.begin(), binary.end());
  const std::size_t n = binary.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!binary[i]) continue;
    const bool prev = i > 0 && binary[i - 1] && adjacent(stream, i - 1, i);
    const bool next = i + 1 < n && binary[i + 1] && adjacent(stream, i, i + 1);
    if (!prev && !next) out[i] = 0;
  }
  return out;
}

std::vector<SeizureEvent> group_events(std::span<const std::uint8_t> binary, const PredictionStream& stream,
                                       std::int64_t window_s) {
  check_aligned(binary, stream);
  if (window_s < 1) fail(ErrorKind::Validation, "window length must be positive");
  std::vector<SeizureEvent> events;
  std::size_t i = 0;
  const std::size_t n = binary.size();
  while (i < n) {
    if (!binary[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    double sum = stream.entries[i].probability;
    while (j + 1 < n && binary[j + 1] && adjacent(stream, j, j + 1)) {
      ++j;
      sum += stream.entries[j].probability;
    }
    const auto first = stream.entries[i].time;
    const auto last = stream.entries[j].time;
    events.push_back({first, (last - first).count() + window_s, sum / static_cast<double>(j - i + 1)});
    i = j + 1;
  }
  return events;
}

std::vector<SeizureEvent> detect_events(const PredictionStream& stream, double threshold, std::int64_t window_s) {
  const auto positives = remove_isolated(binarize(stream, threshold), stream);
  return group_events(positives, stream, window_s);
}

SweepOutcome sweep(const PredictionStream& stream, std::span<const SeizureAnnotation> truth, std::int64_t window_s,
                   unsigned threads) {
  if (stream.empty()) fail(ErrorKind::EmptyStream, "cannot sweep thresholds over an empty stream");
  if (truth.empty()) fail(ErrorKind::Validation, "sweep needs at least one true event");
  std::set<double, std::greater<>> candidates = {0.0, 1.0};
  for (const auto& e : stream.entries) candidates.insert(e.probability);

  SweepOutcome out;
  out.results.resize(candidates.size());
  std::vector<double> thresholds(candidates.begin(), candidates.end());
  parallel_for(thresholds.size(), threads, [&](std::size_t k) {
    const auto events = detect_events(stream, thresholds[k], window_s);
    const auto m = event_metrics(events, truth);
    out.results[k] = {thresholds[k], m.n_detected, m.n_false_positive_events, m.n_predicted_events, m.n_true_events};
  });

  const SweepResult* best = nullptr;
  for (const auto& r : out.results) {
    if (r.detects_all()) {
      best = &r;
      break;
    }
  }
  if (!best) {
    for (const auto& r : out.results) {
      // Descending thresholds: strict comparisons keep the highest on ties.
      if (!best || r.n_true_detected > best->n_true_detected ||
          (r.n_true_detected == best->n_true_detected && r.n_false_positive_events < best->n_false_positive_events)) {
        best = &r;
      }
    }
  }
  out.selected = *best;
  return out;
}

std::string format_events_csv(std::span<const SeizureEvent> events) {
  std::string out = "start_time,duration_s,confidence\n";
  for (const auto& e : events) {
    out += format_iso8601(e.start_time) + "," + std::to_string(e.duration_s) + "," + format_probability(e.confidence) + "\n";
  }
  return out;
}

std::vector<SeizureEvent> parse_events_csv(std::string_view csv) {
  std::vector<SeizureEvent> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header = true;
  while (pos < csv.size()) {
    auto nl = csv.find('\n', pos);
    if (nl == std::string_view::npos) nl = csv.size();
    auto line = csv.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      if (line != "start_time,duration_s,confidence") fail(ErrorKind::Format, "line 1: unexpected events header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      fail(ErrorKind::Format, "line " + std::to_string(line_no) + ": expected 3 fields");
    }
    SeizureEvent e;
    const auto t = parse_iso8601(line.substr(0, c1));
    const auto dur = line.substr(c1 + 1, c2 - c1 - 1);
    const auto conf = line.substr(c2 + 1);
    auto r1 = std::from_chars(dur.data(), dur.data() + dur.size(), e.duration_s);
    auto r2 = std::from_chars(conf.data(), conf.data() + conf.size(), e.confidence);
    if (!t || r1.ec != std::errc{} || r1.ptr != dur.data() + dur.size() || r2.ec != std::errc{} ||
        r2.ptr != conf.data() + conf.size() || e.duration_s < 1 || !(e.confidence >= 0 && e.confidence <= 1)) {
      fail(ErrorKind::Format, "line " + std::to_string(line_no) + ": malformed event row");
    }
    e.start_time = *t;
    out.push_back(e);
  }
  if (header) fail(ErrorKind::Format, "missing events header");
  return out;
}

std::vector<SeizureEvent> read_events_csv(const std::filesystem::path& path) {
  return parse_events_csv(read_text_file(path, kModule));
}

std::string format_report_text(std::span<const SeizureEvent> events, const std::optional<SweepResult>& sweep,
                               std::span<const std::string> header_lines) {
  std::vector<SeizureEvent> sorted(events.begin(), events.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SeizureEvent& a, const SeizureEvent& b) { return a.start_time < b.start_time; });
  std::string out = "Seizure event report\n";
  for (const auto& h : header_lines) out += h + "\n";
  out += "events: " + std::to_string(sorted.size()) + "\n\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-4s  %-20s  %10s  %10s\n", "#", "start (UTC)", "duration_s", "confidence");
  out += buf;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%-4zu  %-20s  %10lld  %10.4f\n", i + 1, format_iso8601(sorted[i].start_time).c_str(),
                  static_cast<long long>(sorted[i].duration_s), sorted[i].confidence);
    out += buf;
  }
  if (sweep) {
    std::snprintf(buf, sizeof(buf), "\nsweep: threshold=%s detected=%llu/%llu false_positive_events=%llu\n",
                  format_probability(sweep->threshold).c_str(), static_cast<unsigned long long>(sweep->n_true_detected),
                  static_cast<unsigned long long>(sweep->n_true_events),
                  static_cast<unsigned long long>(sweep->n_false_positive_events));
    out += buf;
  }
  return out;
}

void report(std::span<const SeizureEvent> events, const std::optional<SweepResult>& sweep,
            const std::filesystem::path& dir, std::span<const std::string> header_lines) {
  std::vector<SeizureEvent> sorted(events.begin(), events.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SeizureEvent& a, const SeizureEvent& b) { return a.start_time < b.start_time; });
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  write_text_file(dir / "events.csv", format_events_csv(sorted), kModule);
  write_text_file(dir / "report.txt", format_report_text(sorted, sweep, header_lines), kModule);
}

}  // namespace ictal
