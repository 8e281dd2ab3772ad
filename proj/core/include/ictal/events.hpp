#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ictal/event.hpp"
#include "ictal/metrics.hpp"
#include "ictal/signal_io.hpp"

namespace ictal {

// 1 iff probability >= threshold.
std::vector<std::uint8_t> binarize(const PredictionStream& stream, double threshold);

// Single pass: a positive whose previous and next grid positions are both
// negative is cleared. A neighbour that is out of range or separated by a
// timestamp gap counts as negative.
std::vector<std::uint8_t> remove_isolated(std::span<const std::uint8_t> binary, const PredictionStream& stream);

// Each maximal run of positives on consecutive grid points becomes one event
// spanning the union of its windows: [first, last + window_s).
std::vector<SeizureEvent> group_events(std::span<const std::uint8_t> binary, const PredictionStream& stream,
                                       std::int64_t window_s);

// binarize -> remove_isolated -> group_events.
std::vector<SeizureEvent> detect_events(const PredictionStream& stream, double threshold, std::int64_t window_s);

struct SweepResult {
  double threshold = 0.0;
  std::uint64_t n_true_detected = 0;
  std::uint64_t n_false_positive_events = 0;
  std::uint64_t n_predicted_events = 0;
  std::uint64_t n_true_events = 0;

  bool detects_all() const { return n_true_detected == n_true_events; }
  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

struct SweepOutcome {
  std::vector<SweepResult> results;  // descending threshold
  SweepResult selected;
};

// Runs the event pipeline at every distinct stream probability plus 0 and 1.
// Selects the highest threshold that detects every true event; failing that,
// the most detections, then fewest false positives, then highest threshold.
SweepOutcome sweep(const PredictionStream& stream, std::span<const SeizureAnnotation> truth, std::int64_t window_s,
                   unsigned threads = 0);

// `start_time,duration_s,confidence`
std::string format_events_csv(std::span<const SeizureEvent> events);
std::vector<SeizureEvent> parse_events_csv(std::string_view csv);
std::vector<SeizureEvent> read_events_csv(const std::filesystem::path& path);

std::string format_report_text(std::span<const SeizureEvent> events, const std::optional<SweepResult>& sweep,
                               std::span<const std::string> header_lines = {});

// Writes <dir>/events.csv and <dir>/report.txt.
void report(std::span<const SeizureEvent> events, const std::optional<SweepResult>& sweep,
            const std::filesystem::path& dir, std::span<const std::string> header_lines = {});

}  // namespace ictal
