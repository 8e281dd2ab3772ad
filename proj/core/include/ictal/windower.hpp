#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "ictal/signal_io.hpp"

namespace ictal {

constexpr std::int64_t kDefaultWindowSeconds = 60;
constexpr std::int64_t kDefaultStrideSeconds = 10;

// Fixed-length windows with start timestamps and binary labels.
//
// Rows are views into a shared sample buffer (the source recording, or a
// packed buffer for sets loaded from disk), so building and subsetting a set
// never copies signal data.
class LabeledWindowSet {
 public:
  LabeledWindowSet() = default;
  LabeledWindowSet(std::shared_ptr<const std::vector<float>> buffer, std::vector<std::size_t> offsets,
                   std::vector<Timestamp> start_times, std::vector<std::uint8_t> labels, std::size_t window_len,
                   std::int64_t window_s, std::int64_t stride_s, Rational sample_rate_hz);

  std::size_t size() const { return offsets_.size(); }
  bool empty() const { return offsets_.empty(); }
  std::size_t window_len() const { return window_len_; }
  std::span<const float> window(std::size_t i) const {
    return std::span<const float>(*buffer_).subspan(offsets_[i], window_len_);
  }

  const std::vector<Timestamp>& start_times() const { return start_times_; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }
  std::int64_t window_s() const { return window_s_; }
  std::int64_t stride_s() const { return stride_s_; }
  Rational sample_rate_hz() const { return sample_rate_; }

  std::size_t count_positive() const;

  // Rows at the given (ascending) indices.
  LabeledWindowSet subset(std::span<const std::size_t> rows) const;

 private:
  std::shared_ptr<const std::vector<float>> buffer_;
  std::vector<std::size_t> offsets_;
  std::vector<Timestamp> start_times_;
  std::vector<std::uint8_t> labels_;
  std::size_t window_len_ = 0;
  std::int64_t window_s_ = kDefaultWindowSeconds;
  std::int64_t stride_s_ = kDefaultStrideSeconds;
  Rational sample_rate_{1};
};

// 1 iff [window_start, window_start + window_s) intersects any annotation.
std::uint8_t window_label(Timestamp window_start, std::int64_t window_s,
                          std::span<const SeizureAnnotation> annotations);

// Windows start on the stride grid anchored at midnight UTC (the first grid
// point at or after the recording start) and advance by stride_s. Samples
// that do not fill a final window are dropped.
LabeledWindowSet make_windows(const SignalRecording& recording, std::span<const SeizureAnnotation> annotations,
                              std::int64_t window_s = kDefaultWindowSeconds,
                              std::int64_t stride_s = kDefaultStrideSeconds);

// Keeps every positive and round(target_neg_per_pos * n_pos) negatives drawn
// uniformly without replacement (all of them if fewer exist).
LabeledWindowSet undersample(const LabeledWindowSet& set, double target_neg_per_pos, std::uint64_t seed);

// Versioned columnar cache: magic "ICTW", version, dims, row-major f32 rows,
// i64 unix-second timestamps, u8 labels.
void save_window_set(const LabeledWindowSet& set, const std::filesystem::path& path);
LabeledWindowSet load_window_set(const std::filesystem::path& path);

}  // namespace ictal
