// Small FFT utilities: an iterative radix-2 complex FFT for the power-of-two
// sizes used here (512, 1024) and a table-driven 300-point real DFT for the
// per-band autocorrelation features.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "coughdet/common.hpp"

namespace coughdet {

// In-place radix-2 decimation-in-time FFT. n must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse = false) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw NumericError("fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= static_cast<double>(n);
}

// FFT of a real signal zero-padded to fft_size; returns the full complex
// spectrum (fft_size bins).
inline std::vector<std::complex<double>> fft_real(const double* x, std::size_t n, std::size_t fft_size) {
  std::vector<std::complex<double>> a(fft_size, {0.0, 0.0});
  for (std::size_t i = 0; i < n && i < fft_size; ++i) a[i] = {x[i], 0.0};
  fft_inplace(a);
  return a;
}

// Power spectrum of a real 300-sample frame on the native 300-point DFT grid
// (bins 0..150, spacing 10000/300 Hz). Twiddle tables are built once.
class Dft300 {
 public:
  static constexpr int kN = kWindowSamples;       // 300
  static constexpr int kBins = kN / 2 + 1;        // 151

  Dft300() : cos_(static_cast<std::size_t>(kBins) * kN), sin_(static_cast<std::size_t>(kBins) * kN) {
    for (int k = 0; k < kBins; ++k) {
      for (int n = 0; n < kN; ++n) {
        const double ang = -2.0 * M_PI * k * n / kN;
        cos_[static_cast<std::size_t>(k) * kN + n] = std::cos(ang);
        sin_[static_cast<std::size_t>(k) * kN + n] = std::sin(ang);
      }
    }
  }

  static const Dft300& instance() {
    static const Dft300 tables;
    return tables;
  }

  // power[k] = |sum_n x[n] e^{-i 2 pi k n / 300}|^2 for k = 0..150
  void power_spectrum(const double* x, double* power) const {
    for (int k = 0; k < kBins; ++k) {
      const double* ck = &cos_[static_cast<std::size_t>(k) * kN];
      const double* sk = &sin_[static_cast<std::size_t>(k) * kN];
      double re = 0.0, im = 0.0;
      for (int n = 0; n < kN; ++n) {
        re += x[n] * ck[n];
        im += x[n] * sk[n];
      }
      power[k] = re * re + im * im;
    }
  }

 private:
  std::vector<double> cos_, sin_;
};

}  // namespace coughdet
