// Per-frame feature extraction: assembles the 74 base descriptors per
// channel, appends derivatives, concatenates channels and attaches frame
// labels derived from the annotations.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "coughdet/features/catalog.hpp"
#include "coughdet/features/derivatives.hpp"
#include "coughdet/features/noise.hpp"
#include "coughdet/features/spectral.hpp"
#include "coughdet/framing.hpp"
#include "coughdet/types.hpp"

namespace coughdet {

// Explosive phases are taken to dominate the first 60 ms of a cough event.
inline constexpr double kExplosiveSpanSeconds = 0.060;

struct FeatureMatrix {
  std::size_t n_frames = 0;
  std::size_t n_cols = 0;
  std::vector<float> values;           // row-major, n_frames x n_cols
  std::vector<EventClass> labels;      // per frame, midpoint rule
  std::vector<std::uint8_t> explosive; // per frame, 1 inside first 60 ms of a cough
  std::string subject_id;
  SessionCondition condition = SessionCondition::quiet_sitting;
  std::vector<ChannelRole> channels;
  std::string catalog_hash;
  double hop_s = kHopSeconds;
  double window_s = kWindowSeconds;
  double duration_s = 0.0;  // source recording duration

  float at(std::size_t frame, std::size_t col) const { return values[frame * n_cols + col]; }
  double frame_midpoint_s(std::size_t frame) const { return frame * hop_s + window_s / 2.0; }
};

namespace detail {

// 74 base descriptors for one frame of one channel.
inline void compute_base_features(const Waveform& w, std::size_t k, const Spectrum& spec,
                                  const Spectrum& prev, double* out) {
  const auto frame = frame_view(w, k);
  const auto c = mfcc(spec);
  const auto bark = bark_loudness(spec);
  const auto sub = relative_subband_energy(spec);
  const auto shape = spectral_shape(spec, prev);
  const auto [log_energy, total_loudness] =
      energy_and_total_loudness(frame, std::span<const double>(bark.data(), bark.size()));
  const auto hnr = hnr_bands(frame);
  const auto flat = spectral_flatness_bands(spec);
  const double zcr = zero_crossing_rate(frame);

  // 60 ms context centered on the frame, zero-padded at the edges.
  std::vector<double> context(kSrhContextSamples, 0.0);
  const std::ptrdiff_t center = static_cast<std::ptrdiff_t>(k) * kHopSamples + kWindowSamples / 2;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(w.samples.size());
  for (int i = 0; i < kSrhContextSamples; ++i) {
    const std::ptrdiff_t src = center - kSrhContextSamples / 2 + i;
    if (src >= 0 && src < n) context[i] = w.samples[static_cast<std::size_t>(src)];
  }
  const auto srh = srh_f0_and_periodicity(context);
  const double cgd = chirp_group_delay(frame);

  std::size_t j = 0;
  for (double v : c) out[j++] = v;
  for (double v : bark) out[j++] = v;
  for (double v : sub) out[j++] = v;
  out[j++] = shape.centroid_hz;
  out[j++] = shape.spread_hz;
  out[j++] = shape.decrease;
  out[j++] = shape.variation;
  out[j++] = shape.flux;
  out[j++] = log_energy;
  out[j++] = total_loudness;
  for (double v : hnr) out[j++] = v;
  for (double v : flat) out[j++] = v;
  out[j++] = zcr;
  out[j++] = srh.f0_hz;
  out[j++] = srh.periodicity;
  out[j++] = cgd;
}

}  // namespace detail

// Frame labels use window-midpoint membership: the label is the class of the
// annotated event containing the midpoint, background if none.
inline EventClass frame_label(const std::vector<LabeledEvent>& events, double midpoint_s) {
  for (const auto& e : events)
    if (e.contains(midpoint_s)) return e.cls;
  return EventClass::background;
}

inline bool frame_is_explosive(const std::vector<LabeledEvent>& events, double midpoint_s) {
  for (const auto& e : events)
    if (e.cls == EventClass::cough && midpoint_s >= e.start_s &&
        midpoint_s < e.start_s + kExplosiveSpanSeconds)
      return true;
  return false;
}

inline FeatureMatrix extract_features(const AnnotatedRecording& rec, const std::vector<ChannelRole>& requested) {
  const auto roles = canonical_channel_order(requested);
  std::vector<const Waveform*> chans;
  for (auto role : roles) {
    const Waveform* w = rec.channel(role);
    if (w == nullptr)
      throw ConfigError("extract_features: recording of subject '" + rec.subject_id +
                        "' has no channel with role " + to_string(role));
    chans.push_back(w);
  }
  const auto catalog = build_catalog(roles);
  const auto grid = frame_signal(*chans.front());
  const std::size_t n_frames = grid.n_frames;
  const std::size_t per_channel = kNumFeaturesPerChannel;

  FeatureMatrix m;
  m.n_frames = n_frames;
  m.n_cols = roles.size() * per_channel;
  m.values.assign(n_frames * m.n_cols, 0.0f);
  m.subject_id = rec.subject_id;
  m.condition = rec.condition;
  m.channels = roles;
  m.catalog_hash = catalog.hash();
  m.duration_s = rec.duration_s();

  for (std::size_t ci = 0; ci < chans.size(); ++ci) {
    const Waveform& w = *chans[ci];
    if (frame_count(w.samples.size()) != n_frames)
      throw ValidationError("extract_features: channels disagree on frame count");

    // Base descriptors, frame-sequential (flux/variation carry one frame of
    // spectral memory).
    std::vector<double> base(n_frames * kNumBaseFeatures);
    Spectrum prev;
    prev.magnitudes.assign(kNumBins, 0.0);
    for (std::size_t k = 0; k < n_frames; ++k) {
      Spectrum spec = magnitude_spectrum(frame_view(w, k));
      detail::compute_base_features(w, k, spec, prev, &base[k * kNumBaseFeatures]);
      prev = std::move(spec);
    }

    // Append derivatives column by column.
    const std::size_t col0 = ci * per_channel;
    std::vector<double> seq(n_frames);
    for (int f = 0; f < kNumBaseFeatures; ++f) {
      for (std::size_t k = 0; k < n_frames; ++k) seq[k] = base[k * kNumBaseFeatures + f];
      const auto d1 = delta_sequence(seq);
      const auto d2 = delta_sequence(d1);
      for (std::size_t k = 0; k < n_frames; ++k) {
        float* row = &m.values[k * m.n_cols + col0];
        row[f] = static_cast<float>(seq[k]);
        row[kNumBaseFeatures + f] = static_cast<float>(d1[k]);
        row[2 * kNumBaseFeatures + f] = static_cast<float>(d2[k]);
      }
    }
  }

  for (const float v : m.values)
    if (!std::isfinite(v)) throw NumericError("extract_features: non-finite feature value");

  m.labels.resize(n_frames);
  m.explosive.resize(n_frames);
  for (std::size_t k = 0; k < n_frames; ++k) {
    const double mid = grid.frame_centers_s[k];
    m.labels[k] = frame_label(rec.events, mid);
    m.explosive[k] = frame_is_explosive(rec.events, mid) ? 1 : 0;
  }
  return m;
}

inline FeatureMatrix extract_features(const AnnotatedRecording& rec) {
  std::vector<ChannelRole> roles;
  for (const auto& c : rec.channels) roles.push_back(c.channel_role);
  return extract_features(rec, roles);
}

}  // namespace coughdet
