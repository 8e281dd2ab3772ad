#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ictal/event.hpp"
#include "ictal/signal_io.hpp"

namespace ictal {

struct FrameMetrics {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  // 0/0 precision or recall is reported as 0 with these flags set.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  // Empty when only one class is present.
  std::optional<double> auc;

  std::uint64_t total() const { return tp + fp + tn + fn; }
};

// Confusion counts at `threshold` (positive iff p >= threshold) and the
// threshold-free rank AUC.
FrameMetrics frame_metrics(std::span<const double> probabilities, std::span<const std::uint8_t> labels,
                           double threshold);

// Mann-Whitney U with average ranks for ties. Throws AucUndefined for
// single-class labels.
double rank_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Trapezoidal area under the ROC curve traced over every distinct score.
double auc_check(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct EventMetrics {
  std::uint64_t n_true_events = 0;
  std::uint64_t n_detected = 0;
  std::uint64_t n_predicted_events = 0;
  std::uint64_t n_false_positive_events = 0;
};

// A true event is detected when any predicted event intersects it (half-open
// intervals); a predicted event intersecting no true event is a false
// positive. Truth must be sorted and non-overlapping; predictions sorted by
// start time.
EventMetrics event_metrics(std::span<const SeizureEvent> predicted, std::span<const SeizureAnnotation> truth);

// Window labels for each stream entry: 1 iff [t, t + window_s) meets truth.
std::vector<std::uint8_t> label_stream(const PredictionStream& stream, std::span<const SeizureAnnotation> truth,
                                       std::int64_t window_s);

struct MetricRow {
  std::string modality;
  std::string metric;
  double value = 0.0;
};

std::vector<MetricRow> metric_rows(std::string_view modality, const FrameMetrics& frame,
                                   const std::optional<EventMetrics>& events = std::nullopt);
// `modality,metric,value` rows.
std::string format_metrics_csv(std::span<const MetricRow> rows);
void write_metrics_csv(std::span<const MetricRow> rows, const std::filesystem::path& path);

}  // namespace ictal
