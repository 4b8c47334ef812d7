// Descriptors of the spectral contents: MFCCs, Bark-band loudness, relative
// subband energies, spectral shape measures and frame energy / total
// loudness.
#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "coughdet/spectrum.hpp"

namespace coughdet {

inline constexpr int kNumMfcc = 21;
inline constexpr int kNumMelFilters = 26;
inline constexpr int kNumBarkBands = 18;
inline constexpr int kNumSubbands = 16;
inline constexpr double kSubbandWidthHz = 312.5;

inline double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
inline double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

// Triangular mel filter bank, 26 filters spanning 0-5000 Hz, applied to the
// power spectrum. Filters are area-normalized (2 / bandwidth) so a flat
// power spectrum produces near-equal energies in every band.
class MelFilterBank {
 public:
  MelFilterBank() {
    std::array<double, kNumMelFilters + 2> edges_hz;
    const double mel_max = hz_to_mel(kSampleRate / 2.0);
    for (int i = 0; i < kNumMelFilters + 2; ++i)
      edges_hz[i] = mel_to_hz(mel_max * i / (kNumMelFilters + 1));
    weights_.assign(kNumMelFilters, std::vector<double>(kNumBins, 0.0));
    for (int f = 0; f < kNumMelFilters; ++f) {
      const double lo = edges_hz[f], mid = edges_hz[f + 1], hi = edges_hz[f + 2];
      const double norm = 2.0 / (hi - lo);
      for (int k = 0; k < kNumBins; ++k) {
        const double fk = k * kBinHz;
        if (fk > lo && fk < mid)
          weights_[f][k] = norm * (fk - lo) / (mid - lo);
        else if (fk >= mid && fk < hi)
          weights_[f][k] = norm * (hi - fk) / (hi - mid);
      }
    }
  }

  static const MelFilterBank& instance() {
    static const MelFilterBank bank;
    return bank;
  }

  // Filter energies of the power spectrum, floored before logs elsewhere.
  std::array<double, kNumMelFilters> energies(const Spectrum& spec) const {
    std::array<double, kNumMelFilters> e{};
    for (int f = 0; f < kNumMelFilters; ++f) {
      double acc = 0.0;
      const auto& w = weights_[f];
      for (int k = 0; k < kNumBins; ++k) {
        const double m = spec.magnitudes[k];
        acc += w[k] * m * m;
      }
      e[f] = acc;
    }
    return e;
  }

 private:
  std::vector<std::vector<double>> weights_;
};

// Log mel-filterbank energies followed by an orthonormal DCT-II,
// coefficients 0..20.
inline std::array<double, kNumMfcc> mfcc(const Spectrum& spec) {
  const auto energies = MelFilterBank::instance().energies(spec);
  std::array<double, kNumMelFilters> loge;
  for (int f = 0; f < kNumMelFilters; ++f) loge[f] = std::log(std::max(energies[f], kEnergyFloor));
  std::array<double, kNumMfcc> c{};
  const double n = kNumMelFilters;
  for (int j = 0; j < kNumMfcc; ++j) {
    double acc = 0.0;
    for (int i = 0; i < kNumMelFilters; ++i) acc += loge[i] * std::cos(M_PI * j * (2 * i + 1) / (2.0 * n));
    c[j] = acc * (j == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n));
  }
  return c;
}

// Zwicker critical-band edges covering 0-5000 Hz; the top band is truncated
// at the Nyquist frequency.
inline const std::array<double, kNumBarkBands + 1>& bark_edges_hz() {
  static const std::array<double, kNumBarkBands + 1> edges = {
      0,    100,  200,  300,  400,  510,  630,  770,  920, 1080,
      1270, 1480, 1720, 2000, 2320, 2700, 3150, 3700, 5000};
  return edges;
}

// Specific loudness per Bark band: (band energy)^0.23.
inline std::array<double, kNumBarkBands> bark_loudness(const Spectrum& spec) {
  const auto& edges = bark_edges_hz();
  std::array<double, kNumBarkBands> loud{};
  std::array<double, kNumBarkBands> energy{};
  for (int k = 0; k < kNumBins; ++k) {
    const double f = k * kBinHz;
    const double m = spec.magnitudes[k];
    for (int b = 0; b < kNumBarkBands; ++b) {
      const bool last = b == kNumBarkBands - 1;
      if (f >= edges[b] && (f < edges[b + 1] || (last && f <= edges[b + 1]))) {
        energy[b] += m * m;
        break;
      }
    }
  }
  for (int b = 0; b < kNumBarkBands; ++b) loud[b] = std::pow(energy[b], 0.23);
  return loud;
}

// Energy in 16 equal 312.5 Hz bands divided by the total. Zero-energy frames
// return the uniform vector.
inline std::array<double, kNumSubbands> relative_subband_energy(const Spectrum& spec) {
  std::array<double, kNumSubbands> energy{};
  double total = 0.0;
  for (int k = 0; k < kNumBins; ++k) {
    const double f = k * kBinHz;
    int b = static_cast<int>(f / kSubbandWidthHz);
    if (b >= kNumSubbands) b = kNumSubbands - 1;
    const double p = spec.magnitudes[k] * spec.magnitudes[k];
    energy[b] += p;
    total += p;
  }
  if (total <= 0.0) {
    energy.fill(1.0 / kNumSubbands);
    return energy;
  }
  for (auto& e : energy) e /= total;
  return energy;
}

struct SpectralShape {
  double centroid_hz = 0.0;
  double spread_hz = 0.0;
  double decrease = 0.0;
  double variation = 0.0;
  double flux = 0.0;
};

// Shape of the amplitude spectrum. Variation and flux compare against the
// previous frame's spectrum; pass a zero spectrum for frame 0 (both then
// default to 0 by the zero-energy convention).
inline SpectralShape spectral_shape(const Spectrum& spec, const Spectrum& prev) {
  SpectralShape out;
  const auto& a = spec.magnitudes;
  const auto& b = prev.magnitudes;
  const std::size_t n = a.size();

  double sum = 0.0, fsum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += a[k];
    fsum += spec.bin_frequency(k) * a[k];
  }
  if (sum > 0.0) {
    out.centroid_hz = fsum / sum;
    double var = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = spec.bin_frequency(k) - out.centroid_hz;
      var += d * d * a[k];
    }
    out.spread_hz = std::sqrt(var / sum);
  }

  double dec_num = 0.0, dec_den = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    dec_num += (a[k] - a[0]) / static_cast<double>(k);
    dec_den += a[k];
  }
  out.decrease = dec_den > 0.0 ? dec_num / dec_den : 0.0;

  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < n && k < b.size(); ++k) dot += a[k] * b[k];
  for (std::size_t k = 0; k < n; ++k) na += a[k] * a[k];
  for (std::size_t k = 0; k < b.size(); ++k) nb += b[k] * b[k];
  if (na > 0.0 && nb > 0.0) {
    const double inv_na = 1.0 / std::sqrt(na), inv_nb = 1.0 / std::sqrt(nb);
    out.variation = 1.0 - dot * inv_na * inv_nb;
    double diff2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double bk = k < b.size() ? b[k] : 0.0;
      const double d = a[k] * inv_na - bk * inv_nb;
      diff2 += d * d;
    }
    out.flux = std::sqrt(diff2);
  }
  return out;
}

// Log frame energy (floored) and the sum of the Bark loudness values.
inline std::pair<double, double> energy_and_total_loudness(std::span<const double> frame,
                                                           std::span<const double> bark) {
  double e = 0.0;
  for (double s : frame) e += s * s;
  double total = 0.0;
  for (double l : bark) total += l;
  return {std::log(std::max(e, kEnergyFloor)), total};
}

}  // namespace coughdet
