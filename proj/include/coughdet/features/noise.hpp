// Measures of noise: per-band harmonic-to-noise ratio, spectral flatness,
// zero-crossing rate, SRH pitch/periodicity and the chirp group delay
// spread.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "coughdet/fft.hpp"
#include "coughdet/spectrum.hpp"

namespace coughdet {

inline constexpr int kNumNoiseBands = 4;
// Band edges shared by HNR and flatness: voicing, first formants, upper
// formants, frication.
inline const std::array<double, kNumNoiseBands + 1>& noise_band_edges_hz() {
  static const std::array<double, kNumNoiseBands + 1> edges = {0, 500, 1500, 2500, 5000};
  return edges;
}

inline constexpr double kF0MinHz = 60.0;
inline constexpr double kF0MaxHz = 400.0;
inline constexpr int kLpcOrder = 12;
inline constexpr int kSrhContextSamples = 600;  // 60 ms at 10 kHz
inline constexpr double kHnrClampDb = 40.0;

// dB ratio of periodic to aperiodic energy for a given normalized
// autocorrelation peak, clamped to [-40, +40].
inline double hnr_from_autocorr_peak(double r) {
  if (r >= 1.0) return kHnrClampDb;
  if (r <= 0.0) return -kHnrClampDb;
  const double db = 10.0 * std::log10(r / (1.0 - r));
  return std::clamp(db, -kHnrClampDb, kHnrClampDb);
}

// HNR per band. The band-limited autocorrelation comes from the frame's
// native 300-point power spectrum (Wiener-Khinchin), masked per band; the
// peak is searched over lags corresponding to 60-400 Hz.
inline std::array<double, kNumNoiseBands> hnr_bands(std::span<const double> frame) {
  if (frame.size() != static_cast<std::size_t>(kWindowSamples))
    throw ValidationError("hnr_bands: frame length must be " + std::to_string(kWindowSamples));
  constexpr int n = Dft300::kN;
  constexpr int bins = Dft300::kBins;
  const double bin_hz = static_cast<double>(kSampleRate) / n;

  std::array<double, bins> power;
  Dft300::instance().power_spectrum(frame.data(), power.data());

  const int lag_min = static_cast<int>(std::ceil(kSampleRate / kF0MaxHz));   // 25
  const int lag_max = static_cast<int>(std::floor(kSampleRate / kF0MinHz));  // 166

  const auto& edges = noise_band_edges_hz();
  std::array<double, kNumNoiseBands> out{};
  for (int b = 0; b < kNumNoiseBands; ++b) {
    const double lo = edges[b], hi = edges[b + 1];
    const bool last = b == kNumNoiseBands - 1;
    int k0 = bins, k1 = -1;
    double r0 = 0.0;
    for (int k = 0; k < bins; ++k) {
      const double f = k * bin_hz;
      if (f >= lo && (f < hi || (last && f <= hi))) {
        k0 = std::min(k0, k);
        k1 = std::max(k1, k);
        const double w = (k == 0 || k == bins - 1) ? 1.0 : 2.0;  // conjugate bins
        r0 += w * power[k];
      }
    }
    if (k1 < 0 || r0 <= kEnergyFloor) {
      out[b] = -kHnrClampDb;
      continue;
    }
    double peak = -1.0;
    for (int lag = lag_min; lag <= lag_max; ++lag) {
      double r = 0.0;
      for (int k = k0; k <= k1; ++k) {
        const double w = (k == 0 || k == bins - 1) ? 1.0 : 2.0;
        r += w * power[k] * std::cos(2.0 * M_PI * k * lag / n);
      }
      peak = std::max(peak, r / r0);
    }
    out[b] = hnr_from_autocorr_peak(peak);
  }
  return out;
}

// Geometric over arithmetic mean of band power; 1 for a flat band, near 0
// for a tone. Power values are floored so an empty band reads 1.
inline std::array<double, kNumNoiseBands> spectral_flatness_bands(const Spectrum& spec) {
  const auto& edges = noise_band_edges_hz();
  std::array<double, kNumNoiseBands> out{};
  for (int b = 0; b < kNumNoiseBands; ++b) {
    const double lo = edges[b], hi = edges[b + 1];
    const bool last = b == kNumNoiseBands - 1;
    double log_sum = 0.0, sum = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < spec.n_bins(); ++k) {
      const double f = spec.bin_frequency(k);
      if (f >= lo && (f < hi || (last && f <= hi))) {
        const double p = std::max(spec.magnitudes[k] * spec.magnitudes[k], kEnergyFloor);
        log_sum += std::log(p);
        sum += p;
        ++count;
      }
    }
    if (count == 0) {
      out[b] = 1.0;
      continue;
    }
    const double gm = std::exp(log_sum / count);
    const double am = sum / count;
    out[b] = am > 0.0 ? std::min(gm / am, 1.0) : 1.0;
  }
  return out;
}

// Sign changes divided by (frame length - 1).
inline double zero_crossing_rate(std::span<const double> frame) {
  if (frame.size() < 2) return 0.0;
  int crossings = 0;
  for (std::size_t i = 0; i + 1 < frame.size(); ++i)
    if (frame[i] * frame[i + 1] < 0.0) ++crossings;
  return static_cast<double>(crossings) / static_cast<double>(frame.size() - 1);
}

namespace detail {

// Autocorrelation-method LPC via Levinson-Durbin. Returns prediction
// coefficients a[1..order] (a[0] = 1 implied); zeros when the signal has no
// energy.
inline std::vector<double> lpc_coefficients(std::span<const double> x, int order) {
  std::vector<double> r(order + 1, 0.0);
  const std::size_t n = x.size();
  for (int lag = 0; lag <= order; ++lag) {
    double acc = 0.0;
    for (std::size_t i = lag; i < n; ++i) acc += x[i] * x[i - lag];
    r[lag] = acc;
  }
  std::vector<double> a(order + 1, 0.0);
  if (r[0] <= kEnergyFloor) return a;
  double err = r[0];
  for (int i = 1; i <= order; ++i) {
    double acc = r[i];
    for (int j = 1; j < i; ++j) acc -= a[j] * r[i - j];
    const double k = acc / err;
    std::vector<double> prev(a.begin(), a.begin() + i);
    a[i] = k;
    for (int j = 1; j < i; ++j) a[j] = prev[j] - k * prev[i - j];
    err *= (1.0 - k * k);
    if (err <= 0.0) break;
  }
  return a;
}

}  // namespace detail

struct SrhResult {
  double f0_hz = 0.0;
  double periodicity = 0.0;
};

// Summation of Residual Harmonics on a 60 ms context centered on the frame.
// The LPC(12) residual's amplitude spectrum E is unit-norm; SRH(f) = E(f) +
// sum_{k=2..5} [E(k f) - E((k - 1/2) f)] over f in 60-400 Hz. Returns the
// argmax frequency and the peak clamped to [0, 1]. Silent contexts return
// (0, 0).
inline SrhResult srh_f0_and_periodicity(std::span<const double> context) {
  if (context.size() != static_cast<std::size_t>(kSrhContextSamples))
    throw ValidationError("srh: context length must be " + std::to_string(kSrhContextSamples));
  const std::size_t n = context.size();

  double energy = 0.0;
  for (double s : context) energy += s * s;
  if (energy <= kEnergyFloor) return {};

  // LPC on the Hamming-windowed context, inverse filtering on the raw one.
  std::vector<double> windowed(n);
  for (std::size_t i = 0; i < n; ++i)
    windowed[i] = context[i] * (0.54 - 0.46 * std::cos(2.0 * M_PI * i / (n - 1)));
  const auto a = detail::lpc_coefficients(windowed, kLpcOrder);
  std::vector<double> residual(n);
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (int j = 1; j <= kLpcOrder; ++j)
      if (i >= static_cast<std::size_t>(j)) pred += a[j] * context[i - j];
    residual[i] = context[i] - pred;
  }

  constexpr std::size_t fft_size = 1024;
  for (std::size_t i = 0; i < n; ++i)
    residual[i] *= 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (n - 1));
  auto spec = fft_real(residual.data(), n, fft_size);
  std::vector<double> e(fft_size / 2 + 1);
  double norm2 = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    e[k] = std::abs(spec[k]);
    norm2 += e[k] * e[k];
  }
  if (norm2 <= 0.0) return {};
  const double inv_norm = 1.0 / std::sqrt(norm2);
  for (auto& v : e) v *= inv_norm;

  const double hz_per_bin = static_cast<double>(kSampleRate) / fft_size;
  auto at = [&](double f) {
    const std::size_t k = static_cast<std::size_t>(std::lround(f / hz_per_bin));
    return k < e.size() ? e[k] : 0.0;
  };
  double best_f = 0.0, best = -1.0;
  for (int f = static_cast<int>(kF0MinHz); f <= static_cast<int>(kF0MaxHz); ++f) {
    double srh = at(f);
    for (int k = 2; k <= 5; ++k) srh += at(k * static_cast<double>(f)) - at((k - 0.5) * f);
    if (srh > best) {
      best = srh;
      best_f = f;
    }
  }
  return {best_f, std::clamp(best, 0.0, 1.0)};
}

// Group delay (in samples) of the frame's z-transform evaluated on a circle
// of radius 1.01, per FFT bin over 0-5000 Hz.
inline std::vector<double> chirp_group_delay_profile(std::span<const double> frame, double radius = 1.01) {
  if (frame.size() != static_cast<std::size_t>(kWindowSamples))
    throw ValidationError("chirp_group_delay: frame length must be " + std::to_string(kWindowSamples));
  std::vector<std::complex<double>> y(kFftSize, {0.0, 0.0});
  std::vector<std::complex<double>> ny(kFftSize, {0.0, 0.0});
  double decay = 1.0;
  const double inv_radius = 1.0 / radius;
  for (std::size_t n = 0; n < frame.size(); ++n) {
    const double v = frame[n] * decay;
    y[n] = {v, 0.0};
    ny[n] = {static_cast<double>(n) * v, 0.0};
    decay *= inv_radius;
  }
  fft_inplace(y);
  fft_inplace(ny);
  std::vector<double> gd(kNumBins, 0.0);
  for (int k = 0; k < kNumBins; ++k) {
    const double denom = std::norm(y[k]);
    if (denom > 1e-30)
      gd[k] = (ny[k].real() * y[k].real() + ny[k].imag() * y[k].imag()) / denom;
  }
  return gd;
}

// Scalar summary used in the feature vector: the standard deviation of the
// group-delay profile.
inline double chirp_group_delay(std::span<const double> frame) {
  const auto gd = chirp_group_delay_profile(frame);
  double mean = 0.0;
  for (double v : gd) mean += v;
  mean /= static_cast<double>(gd.size());
  double var = 0.0;
  for (double v : gd) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(gd.size()));
}

}  // namespace coughdet
