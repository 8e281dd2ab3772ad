#include "ictal/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ictal {
namespace {

__extension__ using u128 = unsigned __int128;


Complex unit_root(std::size_t k, std::size_t n) {
  // exp(-2 pi i k / n) evaluated directly per entry; no recurrences.
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> out;
  std::size_t p = 4;
  while (n > 1) {
    while (n % p != 0) {
      switch (p) {
        case 4: p = 2; break;
        case 2: p = 3; break;
        default: p += 2; break;
      }
      if (p * p > n) p = n;
    }
    n /= p;
    out.push_back(p);
    out.push_back(n);
  }
  return out;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

struct FftPlan::Chirp {
  std::size_t m = 0;
  std::vector<Complex> w;          // exp(-pi i k^2 / n), k < n
  std::vector<Complex> kernel_fft; // FFT of the conjugate chirp, length m
  std::unique_ptr<FftPlan> plan;
};

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FftPlan: length must be positive");
  factors_ = factorize(n);
  for (std::size_t i = 0; i < factors_.size(); i += 2) max_radix_ = std::max(max_radix_, factors_[i]);

  if (max_radix_ > kMaxDirectRadix) {
    chirp_ = std::make_unique<Chirp>();
    chirp_->m = next_pow2(2 * n - 1);
    chirp_->plan = std::make_unique<FftPlan>(chirp_->m);
    chirp_->w.resize(n);
    const std::size_t two_n = 2 * n;
    for (std::size_t k = 0; k < n; ++k) {
      // k^2 mod 2n keeps the angle small and exact.
      const auto k2 = static_cast<std::size_t>((static_cast<u128>(k) * k) % two_n);
      chirp_->w[k] = unit_root(k2, two_n);
    }
    std::vector<Complex> b(chirp_->m, Complex{});
    b[0] = std::conj(chirp_->w[0]);
    for (std::size_t k = 1; k < n; ++k) {
      b[k] = std::conj(chirp_->w[k]);
      b[chirp_->m - k] = b[k];
    }
    chirp_->kernel_fft.resize(chirp_->m);
    chirp_->plan->forward(b, chirp_->kernel_fft);
    return;
  }

  twiddles_.resize(n);
  for (std::size_t k = 0; k < n; ++k) twiddles_[k] = unit_root(k, n);
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::forward(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("FftPlan: length mismatch");
  if (n_ == 1) {
    out[0] = in[0];
  } else if (chirp_) {
    bluestein(in, out);
  } else {
    mixed_radix(in.data(), out.data());
  }
}

void FftPlan::mixed_radix(const Complex* in, Complex* out) const { work(out, in, 1, factors_.data()); }

void FftPlan::work(Complex* out, const Complex* in, std::size_t fstride, const std::size_t* factors) const {
  const std::size_t p = factors[0];
  const std::size_t m = factors[1];
  Complex* const out_begin = out;
  Complex* const out_end = out + p * m;

  if (m == 1) {
    for (Complex* o = out; o != out_end; ++o, in += fstride) *o = *in;
  } else {
    for (Complex* o = out; o != out_end; o += m, in += fstride) work(o, in, fstride * p, factors + 2);
  }

  out = out_begin;
  const Complex* tw = twiddles_.data();
  switch (p) {
    case 2: {
      Complex* f2 = out + m;
      for (std::size_t k = 0; k < m; ++k) {
        const Complex t = f2[k] * tw[k * fstride];
        f2[k] = out[k] - t;
        out[k] += t;
      }
      break;
    }
    case 3: {
      const double s = tw[fstride * m].imag();  // sin(-2 pi / 3)
      for (std::size_t k = 0; k < m; ++k) {
        const Complex s1 = out[k + m] * tw[k * fstride];
        const Complex s2 = out[k + 2 * m] * tw[2 * k * fstride];
        const Complex s3 = s1 + s2;
        Complex s0 = s1 - s2;
        const Complex mid = out[k] - 0.5 * s3;
        s0 *= s;
        out[k] += s3;
        out[k + 2 * m] = {mid.real() + s0.imag(), mid.imag() - s0.real()};
        out[k + m] = {mid.real() - s0.imag(), mid.imag() + s0.real()};
      }
      break;
    }
    case 4: {
      for (std::size_t k = 0; k < m; ++k) {
        const Complex s0 = out[k + m] * tw[k * fstride];
        const Complex s1 = out[k + 2 * m] * tw[2 * k * fstride];
        const Complex s2 = out[k + 3 * m] * tw[3 * k * fstride];
        const Complex s5 = out[k] - s1;
        const Complex a = out[k] + s1;
        const Complex s3 = s0 + s2;
        const Complex s4 = s0 - s2;
        out[k + 2 * m] = a - s3;
        out[k] = a + s3;
        out[k + m] = {s5.real() + s4.imag(), s5.imag() - s4.real()};
        out[k + 3 * m] = {s5.real() - s4.imag(), s5.imag() + s4.real()};
      }
      break;
    }
    case 5: {
      const Complex ya = tw[fstride * m];
      const Complex yb = tw[fstride * 2 * m];
      for (std::size_t k = 0; k < m; ++k) {
        Complex* f0 = out + k;
        const Complex s0 = f0[0];
        const Complex s1 = f0[m] * tw[k * fstride];
        const Complex s2 = f0[2 * m] * tw[2 * k * fstride];
        const Complex s3 = f0[3 * m] * tw[3 * k * fstride];
        const Complex s4 = f0[4 * m] * tw[4 * k * fstride];
        const Complex s7 = s1 + s4;
        const Complex s10 = s1 - s4;
        const Complex s8 = s2 + s3;
        const Complex s9 = s2 - s3;
        f0[0] = s0 + s7 + s8;
        const Complex s5{s0.real() + s7.real() * ya.real() + s8.real() * yb.real(),
                         s0.imag() + s7.imag() * ya.real() + s8.imag() * yb.real()};
        const Complex s6{s10.imag() * ya.imag() + s9.imag() * yb.imag(),
                         -s10.real() * ya.imag() - s9.real() * yb.imag()};
        f0[m] = s5 - s6;
        f0[4 * m] = s5 + s6;
        const Complex s11{s0.real() + s7.real() * yb.real() + s8.real() * ya.real(),
                          s0.imag() + s7.imag() * yb.real() + s8.imag() * ya.real()};
        const Complex s12{-s10.imag() * yb.imag() + s9.imag() * ya.imag(),
                          s10.real() * yb.imag() - s9.real() * ya.imag()};
        f0[2 * m] = s11 + s12;
        f0[3 * m] = s11 - s12;
      }
      break;
    }
    default: {
      std::vector<Complex> scratch(p);
      for (std::size_t u = 0; u < m; ++u) {
        for (std::size_t q = 0, k = u; q < p; ++q, k += m) scratch[q] = out[k];
        for (std::size_t q1 = 0, k = u; q1 < p; ++q1, k += m) {
          std::size_t twidx = 0;
          Complex acc = scratch[0];
          for (std::size_t q = 1; q < p; ++q) {
            twidx += fstride * k;
            if (twidx >= n_) twidx -= n_;
            acc += scratch[q] * tw[twidx];
          }
          out[k] = acc;
        }
      }
      break;
    }
  }
}

void FftPlan::bluestein(std::span<const Complex> in, std::span<Complex> out) const {
  const auto& c = *chirp_;
  std::vector<Complex> a(c.m, Complex{});
  for (std::size_t k = 0; k < n_; ++k) a[k] = in[k] * c.w[k];
  std::vector<Complex> fa(c.m);
  c.plan->forward(a, fa);
  // Inverse transform via conj(FFT(conj(.))) / m.
  for (std::size_t k = 0; k < c.m; ++k) fa[k] = std::conj(fa[k] * c.kernel_fft[k]);
  c.plan->forward(fa, a);
  const double scale = 1.0 / static_cast<double>(c.m);
  for (std::size_t k = 0; k < n_; ++k) out[k] = std::conj(a[k]) * scale * c.w[k];
}

RealFft::RealFft(std::size_t n) : n_(n), plan_(n >= 2 && n % 2 == 0 ? n / 2 : n) {
  if (n_ % 2 == 0 && n_ >= 2) {
    fold_twiddles_.resize(n_ / 2 + 1);
    for (std::size_t k = 0; k <= n_ / 2; ++k) fold_twiddles_[k] = unit_root(k, n_);
  }
}

void RealFft::forward(std::span<const double> in, std::span<Complex> out) const {
  if (in.size() != n_ || out.size() != bins()) throw std::invalid_argument("RealFft: length mismatch");
  if (fold_twiddles_.empty()) {
    std::vector<Complex> z(in.begin(), in.end());
    std::vector<Complex> spectrum(n_);
    plan_.forward(z, spectrum);
    for (std::size_t k = 0; k < bins(); ++k) out[k] = spectrum[k];
    return;
  }
  const std::size_t half = n_ / 2;
  std::vector<Complex> z(half);
  for (std::size_t j = 0; j < half; ++j) z[j] = {in[2 * j], in[2 * j + 1]};
  std::vector<Complex> zf(half);
  plan_.forward(z, zf);
  for (std::size_t k = 0; k <= half; ++k) {
    const Complex zk = zf[k == half ? 0 : k];
    const Complex zc = std::conj(zf[k == 0 ? 0 : half - k]);
    const Complex even = 0.5 * (zk + zc);
    const Complex diff = zk - zc;
    const Complex odd{0.5 * diff.imag(), -0.5 * diff.real()};  // diff / (2i)
    out[k] = even + fold_twiddles_[k] * odd;
  }
}

}  // namespace ictal
