#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ictal {

// Contiguous run of series positions [start, start + length).
struct Interval {
  std::uint32_t start = 0;
  std::uint32_t length = 0;

  bool valid_for(std::size_t series_len) const {
    return length >= 1 && static_cast<std::size_t>(start) + length <= series_len;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct IntervalFeatures {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double slope = 0.0;   // least squares against positions 0..length-1
};

// Number of features contributed by each interval (mean, std, slope).
constexpr std::size_t kFeaturesPerInterval = 3;

// O(1) interval statistics over one series after an O(n) build.
//
// Values are centred on a reference sample before accumulation so constant
// series give exactly zero spread and slope. Short intervals are summed
// directly to avoid prefix-difference cancellation.
class IntervalFeatureTable {
 public:
  static constexpr std::uint32_t kDirectLength = 32;

  explicit IntervalFeatureTable(std::span<const double> series);

  std::size_t size() const { return series_.size(); }
  IntervalFeatures features(Interval iv) const;
  // kind: 0 mean, 1 std, 2 slope.
  double feature(Interval iv, std::size_t kind) const;

 private:
  std::span<const double> series_;
  double reference_ = 0.0;
  std::vector<long double> sum_;
  std::vector<long double> sum_sq_;
  std::vector<long double> sum_ix_;
};

// Throws Bounds for an interval that does not fit the series.
IntervalFeatures interval_features(std::span<const double> series, Interval iv);

}  // namespace ictal
