#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ictal/error.hpp"
#include "ictal/fft.hpp"
#include "ictal/spectral.hpp"
#include "ictal/windower.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ictal;
using ictal::test::at;
using ictal::test::error_kind;
using ictal::test::kEpoch2024;

namespace {

std::vector<double> normal_window(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("fft matches the direct dft over many lengths") {
  // Powers of two, mixed radices, a prime at the direct-radix limit and
  // primes above it (Bluestein).
  for (std::size_t n : {2, 3, 4, 5, 7, 8, 12, 16, 30, 61, 67, 97, 120, 127, 360, 1000, 1021, 1024, 2 * 1031, 7200}) {
    const auto x = normal_window(n, n);
    const auto got = fft_magnitude(x);
    const auto want = oracle::dft_magnitude(x);
    REQUIRE(got.size() == n / 2 + 1);
    INFO("n = " << n);
    CHECK(max_abs_diff(got, want) <= 1e-9);
  }
}

TEST_CASE("complex plan against a direct sum") {
  for (std::size_t n : {6, 11, 64, 71, 150}) {
    std::mt19937_64 rng(n);
    std::normal_distribution<double> g;
    std::vector<Complex> in(n), out(n);
    for (auto& c : in) c = {g(rng), g(rng)};
    FftPlan(n).forward(in, out);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<long double> acc = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const long double a = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((k * j) % n) / n;
        acc += std::complex<long double>(in[j].real(), in[j].imag()) * std::complex<long double>(std::cos(a), std::sin(a));
      }
      worst = std::max(worst, static_cast<double>(std::abs(acc - std::complex<long double>(out[k].real(), out[k].imag()))));
    }
    INFO("n = " << n);
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("constant window") {
  for (std::size_t n : {9, 64, 7200}) {
    const std::vector<double> x(n, -2.5);
    const auto m = fft_magnitude(x);
    CHECK(m[0] == doctest::Approx(2.5 * static_cast<double>(n)).epsilon(1e-12));
    double rest = 0.0;
    for (std::size_t k = 1; k < m.size(); ++k) rest = std::max(rest, m[k]);
    CHECK(rest <= 1e-9);
  }
}

TEST_CASE("on-bin sinusoid") {
  const std::size_t n = 1200;
  const std::size_t k0 = 37;
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = std::cos(2.0 * std::numbers::pi * static_cast<double>(k0 * j % n) / static_cast<double>(n));
  }
  const auto m = fft_magnitude(x);
  CHECK(m[k0] == doctest::Approx(n / 2.0).epsilon(1e-12));
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k != k0) CHECK(m[k] <= 1e-9);
  }
}

TEST_CASE("parseval and sign invariance") {
  for (std::size_t n : {8, 121, 1024, 3001}) {
    const auto x = normal_window(n, 100 + n);
    const auto m = fft_magnitude(x);
    long double time = 0, freq = 0;
    for (double v : x) time += static_cast<long double>(v) * v;
    for (std::size_t k = 0; k < m.size(); ++k) {
      const bool self_conjugate = k == 0 || (n % 2 == 0 && k == n / 2);
      freq += (self_conjugate ? 1.0L : 2.0L) * m[k] * m[k];
    }
    freq /= static_cast<long double>(n);
    CHECK(static_cast<double>(std::abs(freq - time) / time) <= 1e-6);

    auto neg = x;
    for (auto& v : neg) v = -v;
    CHECK(max_abs_diff(fft_magnitude(neg), m) == 0.0);
  }
}

TEST_CASE("magnitude rejects degenerate input") {
  CHECK(error_kind([] { fft_magnitude(std::vector<double>{1.0}); }) == ErrorKind::Shape);
  std::vector<double> x(16, 1.0);
  x[3] = std::numeric_limits<double>::infinity();
  CHECK(error_kind([&] { fft_magnitude(x); }) == ErrorKind::NonFiniteInput);
  x[3] = std::nan("");
  CHECK(error_kind([&] { fft_magnitude(x); }) == ErrorKind::NonFiniteInput);
}

TEST_CASE("log magnitude option") {
  const auto x = normal_window(64, 3);
  const auto plain = fft_magnitude(x);
  const auto logged = fft_magnitude(x, SpectralOptions{true, 1});
  for (std::size_t k = 0; k < plain.size(); ++k) CHECK(logged[k] == doctest::Approx(std::log1p(plain[k])));
}

TEST_CASE("transform_set shape, labels and thread invariance") {
  std::mt19937_64 rng(9);
  std::normal_distribution<float> g;
  std::vector<float> s(500 * 300);
  for (auto& v : s) v = g(rng);
  const SignalRecording rec(std::move(s), Rational(500), at(kEpoch2024), "ECoG", "uV", "ratA");
  const std::vector<SeizureAnnotation> anns = {{"ratA", at(kEpoch2024 + 130), 40}};
  const auto set = make_windows(rec, anns, 60, 10);

  const auto one = transform_set(set, SpectralOptions{false, 1});
  const auto many = transform_set(set, SpectralOptions{false, 4});
  CHECK(one.n_bins == 15001);
  CHECK(one.bin_hz == doctest::Approx(1.0 / 60.0));
  CHECK(one.size() == set.size());
  CHECK(one.labels == set.labels());
  CHECK(one.start_times == set.start_times());
  CHECK(one.values == many.values);

  std::vector<double> w(set.window(4).begin(), set.window(4).end());
  CHECK(max_abs_diff(std::vector<double>(one.row(4).begin(), one.row(4).end()), oracle::dft_magnitude(w)) <= 1e-9);

  const auto empty = transform_set(set.subset(std::vector<std::size_t>{}));
  CHECK(empty.empty());
  CHECK(empty.values.empty());
}

TEST_CASE("raw feature set keeps the samples") {
  std::vector<float> s(200);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<float>(i);
  const SignalRecording rec(std::move(s), Rational(1), at(kEpoch2024));
  const auto set = make_windows(rec, {}, 60, 10);
  const auto raw = raw_feature_set(set);
  CHECK(raw.n_bins == 60);
  CHECK(raw.bin_hz == 0.0);
  CHECK(raw.row(2)[0] == 20.0);
  CHECK(raw.row(2)[59] == 79.0);
}
