// Loading and validation of annotated recordings. Ingestion resamples to
// 10 kHz and normalizes amplitudes by the recording's peak absolute sample.
#pragma once

#include <string>
#include <vector>

#include "coughdet/annotations.hpp"
#include "coughdet/manifest.hpp"
#include "coughdet/resample.hpp"
#include "coughdet/types.hpp"
#include "coughdet/wav.hpp"

namespace coughdet {

inline AnnotatedRecording load_recording(const std::string& audio_path, const std::string& annotation_path,
                                         const std::vector<ChannelRole>& roles, const std::string& subject_id,
                                         SessionCondition condition) {
  WavData wav = read_wav(audio_path);
  if (!roles.empty() && roles.size() != wav.channels.size())
    throw ValidationError(audio_path + ": manifest lists " + std::to_string(roles.size()) +
                          " channel roles but file has " + std::to_string(wav.channels.size()) + " channels");

  AnnotatedRecording rec;
  rec.subject_id = subject_id;
  rec.condition = condition;
  for (std::size_t c = 0; c < wav.channels.size(); ++c) {
    Waveform w;
    w.samples = std::move(wav.channels[c]);
    w.sample_rate = wav.sample_rate;
    w.channel_role = roles.empty() ? ChannelRole::audio : roles[c];
    rec.channels.push_back(resample_to_10khz(w));
  }
  normalize_peak(rec);
  rec.events = load_annotations(annotation_path, rec.duration_s());
  return rec;
}

inline AnnotatedRecording load_recording(const std::string& audio_path, const std::string& annotation_path) {
  return load_recording(audio_path, annotation_path, {}, "unknown", SessionCondition::quiet_sitting);
}

inline AnnotatedRecording load_recording(const ManifestEntry& e) {
  return load_recording(e.audio_path, e.labels_path, e.channels, e.subject_id, e.condition);
}

inline std::vector<AnnotatedRecording> load_corpus(const CorpusManifest& m) {
  std::vector<AnnotatedRecording> out;
  out.reserve(m.entries.size());
  for (const auto& e : m.entries) out.push_back(load_recording(e));
  return out;
}

}  // namespace coughdet
