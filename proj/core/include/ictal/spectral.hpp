#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ictal/fft.hpp"
#include "ictal/windower.hpp"

namespace ictal {

struct SpectralOptions {
  // log1p of each magnitude; off by default.
  bool log_magnitude = false;
  // 0 = hardware concurrency. Output is identical for any value.
  unsigned threads = 0;
};

// Row-major matrix of per-window series (FFT magnitudes, or raw samples for
// untransformed sets) with the source set's timestamps and labels.
struct FeatureWindowSet {
  std::size_t n_bins = 0;
  double bin_hz = 0.0;
  std::vector<double> values;
  std::vector<Timestamp> start_times;
  std::vector<std::uint8_t> labels;
  std::int64_t window_s = kDefaultWindowSeconds;
  std::int64_t stride_s = kDefaultStrideSeconds;

  std::size_t size() const { return start_times.size(); }
  bool empty() const { return start_times.empty(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values).subspan(i * n_bins, n_bins);
  }
  std::span<double> row(std::size_t i) { return std::span<double>(values).subspan(i * n_bins, n_bins); }
};

// Transformer bound to one window length; reuses its FFT plan across rows.
class SpectrumTransformer {
 public:
  explicit SpectrumTransformer(std::size_t window_len, SpectralOptions options = {});

  std::size_t window_len() const { return fft_.size(); }
  std::size_t bins() const { return fft_.bins(); }

  // |X_k| for k = 0..floor(N/2). Throws NonFiniteInput on NaN/Inf samples.
  void magnitude(std::span<const float> window, std::span<double> out) const;
  void magnitude(std::span<const double> window, std::span<double> out) const;

 private:
  RealFft fft_;
  SpectralOptions options_;
};

std::vector<double> fft_magnitude(std::span<const double> window, SpectralOptions options = {});
std::vector<double> fft_magnitude(std::span<const float> window, SpectralOptions options = {});

FeatureWindowSet transform_set(const LabeledWindowSet& set, SpectralOptions options = {});

// Untransformed windows as a feature set (bins = samples, bin_hz = 0).
FeatureWindowSet raw_feature_set(const LabeledWindowSet& set);

}  // namespace ictal
