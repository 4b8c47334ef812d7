// Band-limited resampling to the pipeline rate of 10 kHz using a
// Kaiser-windowed sinc kernel evaluated directly per output sample.
#pragma once

#include <cmath>
#include <vector>

#include "coughdet/types.hpp"

namespace coughdet {

namespace detail {

// Zeroth-order modified Bessel function, power series.
inline double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  double half = x / 2.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half / k) * (half / k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace detail

// Resamples to exactly 10 kHz. Source rates below 8 kHz are rejected: the
// band above the source Nyquist cannot be synthesized. A source already at
// 10 kHz passes through bit-identically.
inline Waveform resample_to_10khz(const Waveform& w) {
  if (w.sample_rate < 8000)
    throw ValidationError("resample_to_10khz: unsupported source rate " + std::to_string(w.sample_rate) +
                          " Hz (minimum 8000 Hz)");
  if (w.samples.empty()) throw ValidationError("resample_to_10khz: empty waveform");
  if (w.sample_rate == kSampleRate) return w;

  const double src_rate = static_cast<double>(w.sample_rate);
  const double step = src_rate / kSampleRate;  // source samples per output sample
  // Cutoff in cycles per source sample, just under the tighter Nyquist.
  const double cutoff = 0.98 * std::min(0.5, static_cast<double>(kSampleRate) / (2.0 * src_rate));
  const int half_width = std::max(32, static_cast<int>(std::ceil(16.0 / cutoff)));
  const double beta = 10.0;
  const double i0_beta = detail::bessel_i0(beta);

  const std::size_t n_in = w.samples.size();
  const std::size_t n_out = static_cast<std::size_t>(std::llround(n_in * static_cast<double>(kSampleRate) / src_rate));

  Waveform out;
  out.sample_rate = kSampleRate;
  out.channel_role = w.channel_role;
  out.samples.resize(n_out);

  for (std::size_t n = 0; n < n_out; ++n) {
    const double t = n * step;  // position in source samples
    const long k0 = std::lround(std::floor(t)) - half_width + 1;
    const long k1 = std::lround(std::floor(t)) + half_width;
    double acc = 0.0, norm = 0.0;
    for (long k = k0; k <= k1; ++k) {
      const double u = static_cast<double>(k) - t;
      const double x = u / half_width;
      if (x <= -1.0 || x >= 1.0) continue;
      const double window = detail::bessel_i0(beta * std::sqrt(1.0 - x * x)) / i0_beta;
      const double arg = 2.0 * cutoff * u;
      const double sinc = arg == 0.0 ? 1.0 : std::sin(M_PI * arg) / (M_PI * arg);
      const double h = 2.0 * cutoff * sinc * window;
      norm += h;
      if (k >= 0 && k < static_cast<long>(n_in)) acc += w.samples[k] * h;
    }
    out.samples[n] = norm > 0.0 ? acc / norm : 0.0;
  }
  return out;
}

}  // namespace coughdet
