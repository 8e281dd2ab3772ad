#include "ictal/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "ictal/error.hpp"
#include "ictal/windower.hpp"

namespace ictal {
namespace {

constexpr std::string_view kModule = "metrics";

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

void check_aligned(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    fail(ErrorKind::Shape, std::to_string(scores.size()) + " scores vs " + std::to_string(labels.size()) + " labels");
  }
  for (auto l : labels) {
    if (l > 1) fail(ErrorKind::Validation, "labels must be 0 or 1");
  }
}

std::pair<std::uint64_t, std::uint64_t> class_counts(std::span<const std::uint8_t> labels) {
  const auto pos = static_cast<std::uint64_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
  return {pos, labels.size() - pos};
}

}  // namespace

double rank_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_aligned(scores, labels);
  const auto [n_pos, n_neg] = class_counts(labels);
  if (n_pos == 0 || n_neg == 0) fail(ErrorKind::AucUndefined, "AUC needs both classes");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of (1-based, tie-averaged) ranks of positives, doubled to stay integral.
  std::uint64_t twice_rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::uint64_t pos_in_group = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      pos_in_group += labels[order[j]];
      ++j;
    }
    // ranks i+1 .. j average to (i + 1 + j) / 2
    twice_rank_sum += pos_in_group * (i + 1 + j);
    i = j;
  }
  const double u = static_cast<double>(twice_rank_sum) / 2.0 - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double auc_check(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_aligned(scores, labels);
  const auto [n_pos, n_neg] = class_counts(labels);
  if (n_pos == 0 || n_neg == 0) fail(ErrorKind::AucUndefined, "AUC needs both classes");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double area = 0.0;
  std::uint64_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const std::uint64_t tp0 = tp, fp0 = fp;
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] ? tp : fp)++;
      ++j;
    }
    // trapezoid between (fp0, tp0) and (fp, tp), in count units
    area += static_cast<double>(fp - fp0) * static_cast<double>(tp + tp0) / 2.0;
    i = j;
  }
  return area / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

FrameMetrics frame_metrics(std::span<const double> probabilities, std::span<const std::uint8_t> labels,
                           double threshold) {
  check_aligned(probabilities, labels);
  if (probabilities.empty()) fail(ErrorKind::EmptyStream, "frame metrics need at least one frame");
  FrameMetrics m;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = probabilities[i] >= threshold;
    if (labels[i]) {
      (predicted ? m.tp : m.fn)++;
    } else {
      (predicted ? m.fp : m.tn)++;
    }
  }
  m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(m.total());
  m.precision_degenerate = m.tp + m.fp == 0;
  m.precision = m.precision_degenerate ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  m.recall_degenerate = m.tp + m.fn == 0;
  m.recall = m.recall_degenerate ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  const auto [n_pos, n_neg] = class_counts(labels);
  if (n_pos > 0 && n_neg > 0) m.auc = rank_auc(probabilities, labels);
  return m;
}

EventMetrics event_metrics(std::span<const SeizureEvent> predicted, std::span<const SeizureAnnotation> truth) {
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i].duration_s < 1) fail(ErrorKind::Validation, "true event " + std::to_string(i) + " has no duration");
    if (i > 0 && truth[i].start_time < truth[i - 1].end_time()) {
      fail(ErrorKind::Validation, "true events " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                      " are unsorted or overlapping");
    }
  }
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i].duration_s < 1) fail(ErrorKind::Validation, "predicted event " + std::to_string(i) + " has no duration");
    if (i > 0 && predicted[i].start_time < predicted[i - 1].start_time) {
      fail(ErrorKind::Validation, "predicted events " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                      " are not sorted by start time");
    }
  }

  EventMetrics m;
  m.n_true_events = truth.size();
  m.n_predicted_events = predicted.size();
  std::vector<std::uint8_t> detected(truth.size(), 0);
  for (const auto& p : predicted) {
    // Truth is sorted and disjoint, so end times are sorted as well.
    auto it = std::upper_bound(truth.begin(), truth.end(), p.start_time,
                               [](Timestamp t, const SeizureAnnotation& a) { return t < a.end_time(); });
    bool hit = false;
    for (; it != truth.end() && it->start_time < p.end_time(); ++it) {
      detected[static_cast<std::size_t>(it - truth.begin())] = 1;
      hit = true;
    }
    if (!hit) ++m.n_false_positive_events;
  }
  m.n_detected = static_cast<std::uint64_t>(std::count(detected.begin(), detected.end(), std::uint8_t{1}));
  return m;
}

std::vector<std::uint8_t> label_stream(const PredictionStream& stream, std::span<const SeizureAnnotation> truth,
                                       std::int64_t window_s) {
  std::vector<std::uint8_t> labels(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) labels[i] = window_label(stream.entries[i].time, window_s, truth);
  return labels;
}

std::vector<MetricRow> metric_rows(std::string_view modality, const FrameMetrics& frame,
                                   const std::optional<EventMetrics>& events) {
  const std::string mod(modality);
  std::vector<MetricRow> rows = {
      {mod, "accuracy", frame.accuracy},
      {mod, "precision", frame.precision},
      {mod, "recall", frame.recall},
      {mod, "tp", static_cast<double>(frame.tp)},
      {mod, "fp", static_cast<double>(frame.fp)},
      {mod, "tn", static_cast<double>(frame.tn)},
      {mod, "fn", static_cast<double>(frame.fn)},
      {mod, "precision_degenerate", frame.precision_degenerate ? 1.0 : 0.0},
      {mod, "recall_degenerate", frame.recall_degenerate ? 1.0 : 0.0},
  };
  if (frame.auc) rows.push_back({mod, "auc", *frame.auc});
  if (events) {
    rows.push_back({mod, "true_events", static_cast<double>(events->n_true_events)});
    rows.push_back({mod, "detected_events", static_cast<double>(events->n_detected)});
    rows.push_back({mod, "predicted_events", static_cast<double>(events->n_predicted_events)});
    rows.push_back({mod, "false_positive_events", static_cast<double>(events->n_false_positive_events)});
  }
  return rows;
}

std::string format_metrics_csv(std::span<const MetricRow> rows) {
  std::string out = "modality,metric,value\n";
  for (const auto& r : rows) out += r.modality + "," + r.metric + "," + format_probability(r.value) + "\n";
  return out;
}

void write_metrics_csv(std::span<const MetricRow> rows, const std::filesystem::path& path) {
  write_text_file(path, format_metrics_csv(rows), kModule);
}

}  // namespace ictal
