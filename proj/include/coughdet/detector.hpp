// The two-stage cascade at detection time: per-frame posteriors from both
// networks, fused by multiplication, median-smoothed and segmented into
// events.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "coughdet/audio_io.hpp"
#include "coughdet/mlp_io.hpp"

namespace coughdet {

inline constexpr double kDefaultThreshold = 0.5;
inline constexpr int kMedianFrames = 5;            // odd length nearest 50 ms at the 12 ms hop
inline constexpr double kMergeGapSeconds = 0.120;  // runs closer than this merge
inline constexpr int kMinEventFrames = 2;

struct PosteriorTrack {
  std::vector<double> values;  // per frame, in [0, 1]
  double hop_s = kHopSeconds;
  double window_s = kWindowSeconds;
};

struct DetectionEvent {
  double onset_s = 0.0;
  double offset_s = 0.0;
  double peak_posterior = 0.0;
};

inline PosteriorTrack fuse_posteriors(const std::vector<double>& p_activity,
                                      const std::vector<double>& p_explosive) {
  if (p_activity.size() != p_explosive.size())
    throw ValidationError("fuse_posteriors: track lengths differ (" + std::to_string(p_activity.size()) +
                          " vs " + std::to_string(p_explosive.size()) + ")");
  PosteriorTrack out;
  out.values.resize(p_activity.size());
  for (std::size_t i = 0; i < p_activity.size(); ++i) out.values[i] = p_activity[i] * p_explosive[i];
  return out;
}

// Centered 5-frame median; windows shrink at the track edges.
inline PosteriorTrack median_smooth(const PosteriorTrack& track) {
  PosteriorTrack out = track;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(track.values.size());
  const std::ptrdiff_t half = kMedianFrames / 2;
  double window[kMedianFrames];
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
    const std::ptrdiff_t hi = std::min(n - 1, i + half);
    const std::ptrdiff_t count = hi - lo + 1;
    for (std::ptrdiff_t j = 0; j < count; ++j) window[j] = track.values[lo + j];
    std::sort(window, window + count);
    out.values[i] = window[count / 2];
  }
  return out;
}

// Frames at or above the threshold form runs; runs separated by less than
// 120 ms merge, merged runs spanning fewer than 2 frames are discarded.
// Event boundaries sit at the outer window edges of the run.
inline std::vector<DetectionEvent> segment_events(const PosteriorTrack& track, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw ValidationError("segment_events: threshold must be in (0, 1]");
  struct Run {
    std::size_t first, last;
  };
  std::vector<Run> runs;
  const std::size_t n = track.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (track.values[i] < threshold) continue;
    if (!runs.empty() && runs.back().last + 1 == i)
      runs.back().last = i;
    else
      runs.push_back({i, i});
  }
  const std::size_t max_gap_frames = static_cast<std::size_t>(kMergeGapSeconds / track.hop_s);  // gap < 120 ms
  std::vector<Run> merged;
  for (const auto& r : runs) {
    if (!merged.empty() && r.first - merged.back().last - 1 < max_gap_frames)
      merged.back().last = r.last;
    else
      merged.push_back(r);
  }
  std::vector<DetectionEvent> events;
  for (const auto& r : merged) {
    if (r.last - r.first + 1 < static_cast<std::size_t>(kMinEventFrames)) continue;
    DetectionEvent e;
    e.onset_s = static_cast<double>(r.first) * track.hop_s;
    e.offset_s = static_cast<double>(r.last) * track.hop_s + track.window_s;
    e.peak_posterior = 0.0;
    for (std::size_t i = r.first; i <= r.last; ++i) e.peak_posterior = std::max(e.peak_posterior, track.values[i]);
    events.push_back(e);
  }
  return events;
}

// Per-frame posteriors of one stage over a feature matrix.
inline std::vector<double> stage_posteriors(const FeatureMatrix& features, const StageModel& stage) {
  if (features.catalog_hash != stage.mlp.catalog_hash)
    throw ConfigError("stage_posteriors: feature catalog hash " + features.catalog_hash +
                      " does not match model catalog hash " + stage.mlp.catalog_hash);
  const auto& idx = stage.selection.indices;
  std::vector<double> out(features.n_frames);
  std::vector<double> x(idx.size());
  for (std::size_t k = 0; k < features.n_frames; ++k) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const double v = features.at(k, idx[j]);
      x[j] = (v - stage.mlp.norm_mean[j]) / stage.mlp.norm_std[j];
    }
    out[k] = mlp_forward(stage.mlp, x.data());
  }
  return out;
}

inline PosteriorTrack fused_track(const FeatureMatrix& features, const StageModel& activity,
                                  const StageModel& explosive) {
  auto track = fuse_posteriors(stage_posteriors(features, activity), stage_posteriors(features, explosive));
  track.hop_s = features.hop_s;
  track.window_s = features.window_s;
  return median_smooth(track);
}

inline std::vector<DetectionEvent> detect_from_features(const FeatureMatrix& features,
                                                        const StageModel& activity,
                                                        const StageModel& explosive, double threshold) {
  return segment_events(fused_track(features, activity, explosive), threshold);
}

// Full pipeline on a recording: extract, run both stages, fuse, smooth,
// segment.
inline std::vector<DetectionEvent> detect(const AnnotatedRecording& rec, const StageModel& activity,
                                          const StageModel& explosive, double threshold) {
  auto features = extract_features(rec);
  return detect_from_features(features, activity, explosive, threshold);
}

inline void write_detections_csv(const std::string& path, const std::vector<DetectionEvent>& events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write detections: " + path);
  out << "onset_s,offset_s,peak_posterior\n";
  char buf[96];
  for (const auto& e : events) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", e.onset_s, e.offset_s, e.peak_posterior);
    out << buf;
  }
}

}  // namespace coughdet
