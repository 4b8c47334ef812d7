// Windowed magnitude spectra shared by all feature extractors: Hamming
// window, zero-padding to 512 points, 257 bins at 19.53125 Hz.
#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "coughdet/fft.hpp"

namespace coughdet {

struct Spectrum {
  std::vector<double> magnitudes;  // kNumBins entries, >= 0
  double bin_hz = kBinHz;

  std::size_t n_bins() const { return magnitudes.size(); }
  double bin_frequency(std::size_t k) const { return k * bin_hz; }
};

inline const std::array<double, kWindowSamples>& hamming_window() {
  static const std::array<double, kWindowSamples> w = [] {
    std::array<double, kWindowSamples> a{};
    for (int n = 0; n < kWindowSamples; ++n)
      a[n] = 0.54 - 0.46 * std::cos(2.0 * M_PI * n / (kWindowSamples - 1));
    return a;
  }();
  return w;
}

inline Spectrum magnitude_spectrum(std::span<const double> frame) {
  if (frame.size() != static_cast<std::size_t>(kWindowSamples))
    throw ValidationError("magnitude_spectrum: frame length must be " + std::to_string(kWindowSamples));
  const auto& win = hamming_window();
  std::vector<std::complex<double>> a(kFftSize, {0.0, 0.0});
  for (int n = 0; n < kWindowSamples; ++n) {
    const double v = frame[n] * win[n];
    if (!std::isfinite(v)) throw NumericError("magnitude_spectrum: non-finite sample in frame");
    a[n] = {v, 0.0};
  }
  fft_inplace(a);
  Spectrum s;
  s.magnitudes.resize(kNumBins);
  for (int k = 0; k < kNumBins; ++k) s.magnitudes[k] = std::abs(a[k]);
  return s;
}

}  // namespace coughdet
