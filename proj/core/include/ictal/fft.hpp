#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ictal {

using Complex = std::complex<double>;

// Forward complex DFT of a fixed length, X_k = sum_n x_n exp(-2 pi i k n / N).
//
// Mixed-radix decimation in time over factors 4, 2, 3, 5 and any remaining
// small primes. Lengths with a prime factor above kMaxDirectRadix go through
// Bluestein's chirp-z algorithm on a power-of-two plan, so every N >= 1 is
// O(N log N) and no zero padding of the input ever happens.
class FftPlan {
 public:
  static constexpr std::size_t kMaxDirectRadix = 61;

  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;

  std::size_t size() const { return n_; }

  // out.size() == in.size() == size(); in and out must not alias.
  void forward(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  void mixed_radix(const Complex* in, Complex* out) const;
  void work(Complex* out, const Complex* in, std::size_t fstride, const std::size_t* factors) const;
  void bluestein(std::span<const Complex> in, std::span<Complex> out) const;

  std::size_t n_ = 0;
  std::vector<std::size_t> factors_;  // (radix, remaining length) pairs
  std::vector<Complex> twiddles_;
  std::size_t max_radix_ = 0;

  struct Chirp;
  std::unique_ptr<Chirp> chirp_;
};

// Real-input DFT returning the one-sided spectrum X_0 .. X_{floor(N/2)}.
// Even N is folded into a half-length complex transform.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<Complex> out) const;

 private:
  std::size_t n_;
  FftPlan plan_;
  std::vector<Complex> fold_twiddles_;
};

}  // namespace ictal
