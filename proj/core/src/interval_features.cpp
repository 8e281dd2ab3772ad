#include "ictal/interval_features.hpp"

#include <algorithm>
#include <cmath>

#include "ictal/error.hpp"

namespace ictal {

IntervalFeatureTable::IntervalFeatureTable(std::span<const double> series)
    : series_(series),
      reference_(series.empty() ? 0.0 : series[series.size() / 2]),
      sum_(series.size() + 1),
      sum_sq_(series.size() + 1),
      sum_ix_(series.size() + 1) {
  long double s = 0, s2 = 0, si = 0;
  sum_[0] = sum_sq_[0] = sum_ix_[0] = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const long double c = static_cast<long double>(series[i]) - reference_;
    s += c;
    s2 += c * c;
    si += static_cast<long double>(i) * c;
    sum_[i + 1] = s;
    sum_sq_[i + 1] = s2;
    sum_ix_[i + 1] = si;
  }
}

IntervalFeatures IntervalFeatureTable::features(Interval iv) const {
  const std::size_t s = iv.start;
  const std::size_t len = iv.length;
  const long double n = static_cast<long double>(len);
  IntervalFeatures out;

  if (len <= kDirectLength) {
    long double acc = 0;
    for (std::size_t i = 0; i < len; ++i) acc += static_cast<long double>(series_[s + i]) - reference_;
    const long double mean_c = acc / n;
    long double ss = 0, sxy = 0;
    const long double tbar = (n - 1) / 2;
    for (std::size_t i = 0; i < len; ++i) {
      const long double d = static_cast<long double>(series_[s + i]) - reference_ - mean_c;
      ss += d * d;
      sxy += (static_cast<long double>(i) - tbar) * d;
    }
    out.mean = static_cast<double>(reference_ + mean_c);
    out.stddev = static_cast<double>(std::sqrt(ss / n));
    out.slope = len > 1 ? static_cast<double>(sxy / (n * (n * n - 1) / 12)) : 0.0;
    return out;
  }

  const long double s1 = sum_[s + len] - sum_[s];
  const long double s2 = sum_sq_[s + len] - sum_sq_[s];
  const long double six = sum_ix_[s + len] - sum_ix_[s];
  const long double mean_c = s1 / n;
  const long double var = std::max<long double>(0, s2 / n - mean_c * mean_c);
  // sum over local positions t = i - s of t * c_i
  const long double stx = six - static_cast<long double>(s) * s1;
  const long double tbar = (n - 1) / 2;
  out.mean = static_cast<double>(reference_ + mean_c);
  out.stddev = static_cast<double>(std::sqrt(var));
  out.slope = static_cast<double>((stx - tbar * s1) / (n * (n * n - 1) / 12));
  return out;
}

double IntervalFeatureTable::feature(Interval iv, std::size_t kind) const {
  const auto f = features(iv);
  switch (kind) {
    case 0: return f.mean;
    case 1: return f.stddev;
    default: return f.slope;
  }
}

IntervalFeatures interval_features(std::span<const double> series, Interval iv) {
  if (!iv.valid_for(series.size())) {
    throw Error(ErrorKind::Bounds, "tsforest",
                "interval [" + std::to_string(iv.start) + ", +" + std::to_string(iv.length) +
                    ") does not fit a series of length " + std::to_string(series.size()));
  }
  return IntervalFeatureTable(series).features(iv);
}

}  // namespace ictal
