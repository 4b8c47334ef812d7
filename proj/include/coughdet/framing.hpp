// Frame segmentation: 30 ms windows hopped every 12 ms, trailing partial
// frame dropped.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "coughdet/types.hpp"

namespace coughdet {

struct FrameGrid {
  double hop_s = kHopSeconds;
  double window_s = kWindowSeconds;
  std::size_t n_frames = 0;
  std::vector<double> frame_centers_s;

  double frame_start_s(std::size_t k) const { return static_cast<double>(k) * hop_s; }
  double frame_end_s(std::size_t k) const { return frame_start_s(k) + window_s; }
};

inline std::size_t frame_count(std::size_t n_samples) {
  if (n_samples < static_cast<std::size_t>(kWindowSamples)) return 0;
  return (n_samples - kWindowSamples) / kHopSamples + 1;
}

inline FrameGrid frame_signal(const Waveform& w) {
  if (w.sample_rate != kSampleRate)
    throw ValidationError("frame_signal: expected 10 kHz input, got " + std::to_string(w.sample_rate) + " Hz");
  if (w.samples.size() < static_cast<std::size_t>(kWindowSamples))
    throw ValidationError("frame_signal: waveform too short (" + std::to_string(w.samples.size()) +
                          " samples, minimum " + std::to_string(kWindowSamples) + ")");
  FrameGrid grid;
  grid.n_frames = frame_count(w.samples.size());
  grid.frame_centers_s.resize(grid.n_frames);
  for (std::size_t k = 0; k < grid.n_frames; ++k)
    grid.frame_centers_s[k] = (static_cast<double>(k) * kHopSamples + kWindowSamples / 2.0) / kSampleRate;
  return grid;
}

// Frame k covers samples [k*hop, k*hop + window).
inline std::span<const double> frame_view(const Waveform& w, std::size_t k) {
  return {w.samples.data() + k * kHopSamples, static_cast<std::size_t>(kWindowSamples)};
}

}  // namespace coughdet
