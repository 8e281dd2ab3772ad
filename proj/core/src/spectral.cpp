#include "ictal/spectral.hpp"

#include <cmath>

#include "ictal/error.hpp"
#include "ictal/parallel.hpp"

namespace ictal {
namespace {

constexpr std::string_view kModule = "spectral";

template <typename T>
void magnitude_impl(const RealFft& fft, const SpectralOptions& options, std::span<const T> window,
                    std::span<double> out) {
  if (window.size() != fft.size()) {
    throw Error(ErrorKind::Shape, kModule,
                "window has " + std::to_string(window.size()) + " samples, expected " + std::to_string(fft.size()));
  }
  if (out.size() != fft.bins()) throw Error(ErrorKind::Shape, kModule, "output span has the wrong number of bins");
  std::vector<double> x(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    x[i] = static_cast<double>(window[i]);
    if (!std::isfinite(x[i])) {
      throw Error(ErrorKind::NonFiniteInput, kModule, "sample " + std::to_string(i) + " is not finite");
    }
  }
  std::vector<Complex> spectrum(fft.bins());
  fft.forward(x, spectrum);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double re = spectrum[k].real();
    const double im = spectrum[k].imag();
    const double mag = std::sqrt(re * re + im * im);
    out[k] = options.log_magnitude ? std::log1p(mag) : mag;
  }
}

std::size_t checked_length(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::Shape, kModule, "FFT window needs at least 2 samples, got " + std::to_string(n));
  return n;
}

}  // namespace

SpectrumTransformer::SpectrumTransformer(std::size_t window_len, SpectralOptions options)
    : fft_(checked_length(window_len)), options_(options) {}

void SpectrumTransformer::magnitude(std::span<const float> window, std::span<double> out) const {
  magnitude_impl(fft_, options_, window, out);
}

void SpectrumTransformer::magnitude(std::span<const double> window, std::span<double> out) const {
  magnitude_impl(fft_, options_, window, out);
}

std::vector<double> fft_magnitude(std::span<const double> window, SpectralOptions options) {
  SpectrumTransformer t(window.size(), options);
  std::vector<double> out(t.bins());
  t.magnitude(window, out);
  return out;
}

std::vector<double> fft_magnitude(std::span<const float> window, SpectralOptions options) {
  SpectrumTransformer t(window.size(), options);
  std::vector<double> out(t.bins());
  t.magnitude(window, out);
  return out;
}

FeatureWindowSet transform_set(const LabeledWindowSet& set, SpectralOptions options) {
  FeatureWindowSet out;
  out.start_times = set.start_times();
  out.labels = set.labels();
  out.window_s = set.window_s();
  out.stride_s = set.stride_s();
  if (set.window_len() < 2) {
    if (set.empty()) return out;
    checked_length(set.window_len());
  }
  const SpectrumTransformer transformer(set.window_len(), options);
  out.n_bins = transformer.bins();
  out.bin_hz = set.sample_rate_hz().to_double() / static_cast<double>(set.window_len());
  out.values.resize(set.size() * out.n_bins);
  parallel_for(set.size(), options.threads, [&](std::size_t i) {
    try {
      transformer.magnitude(set.window(i), out.row(i));
    } catch (const Error& e) {
      throw Error(e.kind(), kModule, "row " + std::to_string(i) + ": " + e.detail());
    }
  });
  return out;
}

FeatureWindowSet raw_feature_set(const LabeledWindowSet& set) {
  FeatureWindowSet out;
  out.start_times = set.start_times();
  out.labels = set.labels();
  out.window_s = set.window_s();
  out.stride_s = set.stride_s();
  out.n_bins = set.window_len();
  out.values.resize(set.size() * out.n_bins);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto w = set.window(i);
    std::copy(w.begin(), w.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace ictal
