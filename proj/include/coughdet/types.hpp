// Core domain types: waveforms, annotated events and recordings.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "coughdet/common.hpp"

namespace coughdet {

enum class ChannelRole { audio, contact_trachea, contact_thorax };

enum class SessionCondition { quiet_sitting, tv_noise_sitting, stairs };

// Annotation classes. Background is implicit in files (unlabeled spans) but
// participates in frame labels and evaluation.
enum class EventClass : std::uint8_t {
  background = 0,
  cough = 1,
  forced_expiration = 2,
  throat_clearing = 3,
  laugh = 4,
  speech = 5,
};

inline constexpr int kNumEventClasses = 6;

inline const char* to_string(ChannelRole r) {
  switch (r) {
    case ChannelRole::audio: return "audio";
    case ChannelRole::contact_trachea: return "contact_trachea";
    case ChannelRole::contact_thorax: return "contact_thorax";
  }
  return "?";
}

inline ChannelRole channel_role_from_string(const std::string& s) {
  if (s == "audio") return ChannelRole::audio;
  if (s == "contact_trachea") return ChannelRole::contact_trachea;
  if (s == "contact_thorax") return ChannelRole::contact_thorax;
  throw ValidationError("unknown channel role: '" + s + "'");
}

inline const char* to_string(SessionCondition c) {
  switch (c) {
    case SessionCondition::quiet_sitting: return "quiet_sitting";
    case SessionCondition::tv_noise_sitting: return "tv_noise_sitting";
    case SessionCondition::stairs: return "stairs";
  }
  return "?";
}

inline SessionCondition condition_from_string(const std::string& s) {
  if (s == "quiet_sitting") return SessionCondition::quiet_sitting;
  if (s == "tv_noise_sitting") return SessionCondition::tv_noise_sitting;
  if (s == "stairs") return SessionCondition::stairs;
  throw ValidationError("unknown session condition: '" + s + "'");
}

inline const char* to_string(EventClass c) {
  switch (c) {
    case EventClass::background: return "background";
    case EventClass::cough: return "cough";
    case EventClass::forced_expiration: return "forced_expiration";
    case EventClass::throat_clearing: return "throat_clearing";
    case EventClass::laugh: return "laugh";
    case EventClass::speech: return "speech";
  }
  return "?";
}

inline EventClass event_class_from_string(const std::string& s) {
  if (s == "background") return EventClass::background;
  if (s == "cough") return EventClass::cough;
  if (s == "forced_expiration") return EventClass::forced_expiration;
  if (s == "throat_clearing") return EventClass::throat_clearing;
  if (s == "laugh") return EventClass::laugh;
  if (s == "speech") return EventClass::speech;
  throw ValidationError("unknown event class: '" + s + "'");
}

struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;
  ChannelRole channel_role = ChannelRole::audio;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

struct LabeledEvent {
  double start_s = 0.0;
  double end_s = 0.0;
  EventClass cls = EventClass::background;

  double duration_s() const { return end_s - start_s; }
  bool contains(double t) const { return t >= start_s && t < end_s; }
};

struct AnnotatedRecording {
  std::string subject_id;
  SessionCondition condition = SessionCondition::quiet_sitting;
  std::vector<Waveform> channels;  // equal length, time aligned
  std::vector<LabeledEvent> events;

  double duration_s() const {
    return channels.empty() ? 0.0 : channels.front().duration_s();
  }

  const Waveform* channel(ChannelRole role) const {
    for (const auto& c : channels)
      if (c.channel_role == role) return &c;
    return nullptr;
  }
};

// Sorts by onset and checks the shared-recording invariants. `duration_s`
// < 0 skips the range check (duration unknown).
inline void validate_events(std::vector<LabeledEvent>& events, double duration_s) {
  std::stable_sort(events.begin(), events.end(),
                   [](const LabeledEvent& a, const LabeledEvent& b) { return a.start_s < b.start_s; });
  std::string bad;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    bool ok = e.start_s >= 0.0 && e.start_s < e.end_s && std::isfinite(e.start_s) && std::isfinite(e.end_s);
    if (ok && duration_s >= 0.0 && e.end_s > duration_s + 1e-9) ok = false;
    if (ok && i + 1 < events.size() && events[i + 1].start_s < e.end_s - 1e-9) {
      bad += (bad.empty() ? "" : ", ") + std::string("events ") + std::to_string(i + 1) + "/" +
             std::to_string(i + 2) + " overlap";
      continue;
    }
    if (!ok) bad += (bad.empty() ? "" : ", ") + std::string("event ") + std::to_string(i + 1) + " out of range";
  }
  if (!bad.empty()) throw ValidationError("invalid annotations: " + bad);
}

// Channels are always laid out in role order (audio first), deduplicated.
inline std::vector<ChannelRole> canonical_channel_order(std::vector<ChannelRole> roles) {
  std::sort(roles.begin(), roles.end(),
            [](ChannelRole a, ChannelRole b) { return static_cast<int>(a) < static_cast<int>(b); });
  roles.erase(std::unique(roles.begin(), roles.end()), roles.end());
  return roles;
}

// Scales all channels of a recording so the largest absolute sample is 1.
inline void normalize_peak(AnnotatedRecording& rec) {
  double peak = 0.0;
  for (const auto& ch : rec.channels)
    for (double s : ch.samples) peak = std::max(peak, std::abs(s));
  if (peak <= 0.0) return;
  for (auto& ch : rec.channels)
    for (double& s : ch.samples) s /= peak;
}

}  // namespace coughdet
