// Synthetic labeled corpus generator mimicking the recording protocol: per
// session 15 isolated coughs in three loudness tiers, 3 fits of 3 coughs,
// 3 forced expirations, 5 throat clearings, ~20 s of speech-like signal and
// 3 laughs, over continuous background noise. Deterministic given the seed.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "coughdet/types.hpp"

namespace coughdet {

struct SynthOptions {
  std::vector<ChannelRole> channels = {ChannelRole::audio};
};

namespace synth_detail {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// One-pole lowpass, cutoff in Hz.
inline void lowpass(std::vector<double>& x, double cutoff_hz) {
  const double a = std::exp(-2.0 * M_PI * cutoff_hz / kSampleRate);
  double y = 0.0;
  for (auto& v : x) {
    y = a * y + (1.0 - a) * v;
    v = y;
  }
}

inline std::vector<double> white_noise(Rng& rng, std::size_t n) {
  std::vector<double> x(n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : x) v = u(rng);
  return x;
}

// Acoustic personality of one subject; randomized per subject, fixed across
// that subject's sessions.
struct SubjectVoice {
  double gain;            // overall event gain
  double speech_f0;       // Hz
  double laugh_f0;        // Hz
  double cough_tilt;      // high-frequency emphasis of the burst
  double throat_cutoff;   // Hz
  double noise_level;     // background floor
};

inline SubjectVoice draw_subject(Rng& rng) {
  SubjectVoice v;
  v.gain = uniform(rng, 0.85, 1.0);
  v.speech_f0 = uniform(rng, 110.0, 240.0);
  v.laugh_f0 = uniform(rng, 170.0, 280.0);
  v.cough_tilt = uniform(rng, 0.3, 0.7);
  v.throat_cutoff = uniform(rng, 650.0, 1100.0);
  v.noise_level = uniform(rng, 0.004, 0.008);
  return v;
}

struct RenderedEvent {
  std::vector<double> samples;
  EventClass cls = EventClass::background;
};

// Three-phase cough: a broadband burst with a fast attack and exponential
// decay spanning 50-90 ms, a breathy mid phase, and an optional voiced tail.
inline RenderedEvent render_cough(Rng& rng, const SubjectVoice& voice, double amplitude) {
  const double a = amplitude * voice.gain;
  const int attack = static_cast<int>(uniform(rng, 0.002, 0.008) * kSampleRate);
  const int burst_len = static_cast<int>(uniform(rng, 0.050, 0.090) * kSampleRate);
  const int mid_len = static_cast<int>(uniform(rng, 0.100, 0.250) * kSampleRate);
  const bool voiced = uniform(rng, 0.0, 1.0) < 0.5;
  const int tail_len = voiced ? static_cast<int>(uniform(rng, 0.080, 0.180) * kSampleRate) : 0;
  const double tau = burst_len / 4.0;

  RenderedEvent ev;
  ev.cls = EventClass::cough;
  ev.samples.assign(static_cast<std::size_t>(burst_len + mid_len + tail_len), 0.0);

  // Explosive phase: tilted white noise.
  auto burst = white_noise(rng, burst_len);
  double prev = 0.0;
  for (int i = 0; i < burst_len; ++i) {
    const double flat = burst[i];
    const double tilted = flat + voice.cough_tilt * (flat - prev);  // first difference boosts highs
    prev = flat;
    const double env = (i < attack ? static_cast<double>(i) / attack : std::exp(-(i - attack) / tau));
    ev.samples[i] = a * env * tilted * 0.8;
  }

  // Breathy mid phase: lowpass noise fading out.
  auto mid = white_noise(rng, mid_len);
  lowpass(mid, uniform(rng, 400.0, 800.0));
  for (int i = 0; i < mid_len; ++i) {
    const double env = 1.0 - static_cast<double>(i) / mid_len;
    ev.samples[burst_len + i] += a * 0.45 * env * mid[i] * 3.0;  // lowpass loses power; rescale
  }

  // Voiced tail: damped harmonic stack.
  if (voiced) {
    const double f0 = uniform(rng, 120.0, 220.0);
    const int n_harm = 5;
    double phase[n_harm];
    for (int h = 0; h < n_harm; ++h) phase[h] = uniform(rng, 0.0, 2.0 * M_PI);
    for (int i = 0; i < tail_len; ++i) {
      const double env = std::exp(-3.0 * i / tail_len);
      double s = 0.0;
      for (int h = 0; h < n_harm; ++h) {
        phase[h] += 2.0 * M_PI * f0 * (h + 1) / kSampleRate;
        s += std::sin(phase[h]) / (h + 1);
      }
      ev.samples[burst_len + mid_len + i] += a * 0.18 * env * s;
    }
  }
  return ev;
}

// Forced expiration: lowpass noise with a slow attack and release.
inline RenderedEvent render_expiration(Rng& rng, const SubjectVoice& voice) {
  const int len = static_cast<int>(uniform(rng, 0.5, 0.9) * kSampleRate);
  const int attack = static_cast<int>(uniform(rng, 0.12, 0.22) * kSampleRate);
  const double a = uniform(rng, 0.22, 0.38) * voice.gain;
  RenderedEvent ev;
  ev.cls = EventClass::forced_expiration;
  ev.samples = white_noise(rng, len);
  lowpass(ev.samples, uniform(rng, 300.0, 600.0));
  for (int i = 0; i < len; ++i) {
    double env;
    if (i < attack)
      env = static_cast<double>(i) / attack;
    else
      env = 1.0 - 0.8 * (i - attack) / std::max(1, len - attack);
    ev.samples[i] *= a * env * 4.0;
  }
  return ev;
}

// Throat clearing: band-limited rough noise with a gentle attack and a low
// harmonic buzz, amplitude-modulated at a rough rate.
inline RenderedEvent render_throat_clearing(Rng& rng, const SubjectVoice& voice) {
  const int len = static_cast<int>(uniform(rng, 0.30, 0.50) * kSampleRate);
  const int attack = static_cast<int>(uniform(rng, 0.04, 0.08) * kSampleRate);
  const double a = uniform(rng, 0.25, 0.42) * voice.gain;
  const double buzz_f0 = uniform(rng, 85.0, 120.0);
  const double mod_rate = uniform(rng, 18.0, 28.0);
  RenderedEvent ev;
  ev.cls = EventClass::throat_clearing;
  ev.samples = white_noise(rng, len);
  lowpass(ev.samples, voice.throat_cutoff);
  double buzz_phase = uniform(rng, 0.0, 2.0 * M_PI);
  for (int i = 0; i < len; ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    double env;
    if (i < attack)
      env = static_cast<double>(i) / attack;
    else
      env = 1.0 - 0.7 * (i - attack) / std::max(1, len - attack);
    const double mod = 0.65 + 0.35 * std::sin(2.0 * M_PI * mod_rate * t);
    buzz_phase += 2.0 * M_PI * buzz_f0 / kSampleRate;
    ev.samples[i] = a * env * (ev.samples[i] * 3.5 * mod + 0.35 * std::sin(buzz_phase));
  }
  return ev;
}

// Laugh: a train of short voiced bursts with breathy overlay.
inline RenderedEvent render_laugh(Rng& rng, const SubjectVoice& voice) {
  const int n_bursts = uniform_int(rng, 4, 6);
  const double a = uniform(rng, 0.30, 0.50) * voice.gain;
  std::vector<double> out;
  for (int b = 0; b < n_bursts; ++b) {
    const int burst_len = static_cast<int>(uniform(rng, 0.09, 0.13) * kSampleRate);
    const int gap_len = static_cast<int>(uniform(rng, 0.07, 0.13) * kSampleRate);
    const double f0 = voice.laugh_f0 * uniform(rng, 0.92, 1.08);
    const int attack = static_cast<int>(0.025 * kSampleRate);
    const int n_harm = 8;
    double phase[n_harm];
    for (int h = 0; h < n_harm; ++h) phase[h] = uniform(rng, 0.0, 2.0 * M_PI);
    auto breath = white_noise(rng, burst_len);
    lowpass(breath, 1500.0);
    for (int i = 0; i < burst_len; ++i) {
      double env;
      if (i < attack)
        env = static_cast<double>(i) / attack;
      else
        env = std::exp(-4.0 * (i - attack) / std::max(1, burst_len - attack));
      double s = 0.0;
      for (int h = 0; h < n_harm; ++h) {
        phase[h] += 2.0 * M_PI * f0 * (h + 1) / kSampleRate;
        s += std::sin(phase[h]) / (h + 1);
      }
      out.push_back(a * env * (0.55 * s + 0.8 * breath[i]));
    }
    if (b + 1 < n_bursts) out.insert(out.end(), static_cast<std::size_t>(gap_len), 0.0);
  }
  RenderedEvent ev;
  ev.cls = EventClass::laugh;
  ev.samples = std::move(out);
  return ev;
}

// Speech-like signal: harmonic source with slowly wandering pitch, two
// formant-like emphases and syllabic amplitude modulation.
inline RenderedEvent render_speech(Rng& rng, const SubjectVoice& voice, double duration_s) {
  const int len = static_cast<int>(duration_s * kSampleRate);
  const double a = uniform(rng, 0.26, 0.40) * voice.gain;
  const int n_harm = 18;
  std::vector<double> phase(n_harm);
  std::vector<double> weight(n_harm, 0.0);
  for (auto& p : phase) p = uniform(rng, 0.0, 2.0 * M_PI);
  const double syll_rate = uniform(rng, 3.0, 4.5);
  const double drift_rate = uniform(rng, 0.15, 0.35);
  const double f1_rate = uniform(rng, 0.4, 0.8), f2_rate = uniform(rng, 0.3, 0.6);
  const double f1_phase = uniform(rng, 0.0, 2.0 * M_PI), f2_phase = uniform(rng, 0.0, 2.0 * M_PI);
  auto breath = white_noise(rng, len);
  lowpass(breath, 2500.0);

  RenderedEvent ev;
  ev.cls = EventClass::speech;
  ev.samples.assign(len, 0.0);
  const int block = 100;  // update envelopes every 10 ms
  double f0 = voice.speech_f0;
  for (int i = 0; i < len; ++i) {
    if (i % block == 0) {
      const double t = static_cast<double>(i) / kSampleRate;
      f0 = voice.speech_f0 * (1.0 + 0.18 * std::sin(2.0 * M_PI * drift_rate * t));
      const double formant1 = 550.0 + 300.0 * std::sin(2.0 * M_PI * f1_rate * t + f1_phase);
      const double formant2 = 1700.0 + 600.0 * std::sin(2.0 * M_PI * f2_rate * t + f2_phase);
      for (int h = 0; h < n_harm; ++h) {
        const double fh = f0 * (h + 1);
        const double w1 = std::exp(-0.5 * std::pow((fh - formant1) / 250.0, 2.0));
        const double w2 = 0.6 * std::exp(-0.5 * std::pow((fh - formant2) / 350.0, 2.0));
        weight[h] = (w1 + w2 + 0.08) / (1.0 + 0.25 * h);
      }
    }
    const double t = static_cast<double>(i) / kSampleRate;
    const double syll = std::pow(std::abs(std::sin(2.0 * M_PI * syll_rate * t)), 0.7);
    const double env = 0.2 + 0.8 * syll;
    double s = 0.0;
    for (int h = 0; h < n_harm; ++h) {
      phase[h] += 2.0 * M_PI * f0 * (h + 1) / kSampleRate;
      s += weight[h] * std::sin(phase[h]);
    }
    ev.samples[i] = a * env * (0.5 * s + 0.06 * breath[i]);
  }
  return ev;
}

}  // namespace synth_detail

// Builds one session. The event mix is fixed by the protocol; the order and
// all acoustic parameters are randomized deterministically.
inline AnnotatedRecording synthesize_session(std::uint64_t seed, const std::string& subject_id,
                                             int subject_index, int session_index,
                                             const SynthOptions& options = {}) {
  using namespace synth_detail;
  Rng subject_rng(derive_seed(seed, "subject/" + std::to_string(subject_index)));
  const SubjectVoice voice = draw_subject(subject_rng);
  Rng rng(derive_seed(seed, "session/" + std::to_string(subject_index) + "/" + std::to_string(session_index)));
  const SessionCondition condition = static_cast<SessionCondition>(session_index % 3);

  // Protocol items: 15 isolated coughs (three loudness tiers), 3 fits of 3,
  // 3 forced expirations, 5 throat clearings, one ~20 s speech span, 3
  // laughs.
  enum class Item { cough_high, cough_mid, cough_low, fit, expiration, throat, speech, laugh };
  std::vector<Item> items;
  for (int i = 0; i < 5; ++i) items.push_back(Item::cough_high);
  for (int i = 0; i < 5; ++i) items.push_back(Item::cough_mid);
  for (int i = 0; i < 5; ++i) items.push_back(Item::cough_low);
  for (int i = 0; i < 3; ++i) items.push_back(Item::fit);
  for (int i = 0; i < 3; ++i) items.push_back(Item::expiration);
  for (int i = 0; i < 5; ++i) items.push_back(Item::throat);
  items.push_back(Item::speech);
  for (int i = 0; i < 3; ++i) items.push_back(Item::laugh);
  std::shuffle(items.begin(), items.end(), rng);

  struct Placed {
    std::size_t offset;
    RenderedEvent ev;
  };
  std::vector<Placed> placed;
  std::size_t cursor = static_cast<std::size_t>(uniform(rng, 1.0, 1.5) * kSampleRate);
  auto place = [&](RenderedEvent ev) {
    placed.push_back({cursor, std::move(ev)});
    cursor += placed.back().ev.samples.size();
  };
  auto gap = [&](double lo, double hi) {
    cursor += static_cast<std::size_t>(uniform(rng, lo, hi) * kSampleRate);
  };

  for (const Item item : items) {
    switch (item) {
      case Item::cough_high: place(render_cough(rng, voice, 0.95)); break;
      case Item::cough_mid: place(render_cough(rng, voice, 0.55)); break;
      case Item::cough_low: place(render_cough(rng, voice, 0.30)); break;
      case Item::fit:
        for (int c = 0; c < 3; ++c) {
          place(render_cough(rng, voice, c == 0 ? 0.9 : uniform(rng, 0.45, 0.8)));
          if (c < 2) gap(0.25, 0.45);
        }
        break;
      case Item::expiration: place(render_expiration(rng, voice)); break;
      case Item::throat: place(render_throat_clearing(rng, voice)); break;
      case Item::speech: place(render_speech(rng, voice, uniform(rng, 19.0, 21.0))); break;
      case Item::laugh: place(render_laugh(rng, voice)); break;
    }
    gap(0.7, 1.4);
  }
  const std::size_t total = cursor + static_cast<std::size_t>(1.0 * kSampleRate);

  // Background noise bed, level per condition; the stairs condition adds
  // faint low-frequency thumps and the TV condition a faint speech-like
  // murmur. All of it stays unannotated.
  double level = voice.noise_level;
  if (condition == SessionCondition::tv_noise_sitting) level *= 1.6;
  if (condition == SessionCondition::stairs) level *= 2.2;
  auto audio = white_noise(rng, total);
  lowpass(audio, 1800.0);
  for (auto& v : audio) v *= level * 3.0;
  if (condition == SessionCondition::tv_noise_sitting) {
    double phase = 0.0;
    const double murmur_f0 = uniform(rng, 120.0, 200.0);
    for (std::size_t i = 0; i < total; ++i) {
      const double t = static_cast<double>(i) / kSampleRate;
      const double env = 0.5 + 0.5 * std::sin(2.0 * M_PI * 2.7 * t);
      phase += 2.0 * M_PI * murmur_f0 * (1.0 + 0.1 * std::sin(2.0 * M_PI * 0.4 * t)) / kSampleRate;
      audio[i] += level * 1.5 * env * (std::sin(phase) + 0.5 * std::sin(2.0 * phase));
    }
  }
  if (condition == SessionCondition::stairs) {
    std::size_t step = static_cast<std::size_t>(uniform(rng, 0.3, 0.6) * kSampleRate);
    while (step + 400 < total) {
      const double f = uniform(rng, 70.0, 140.0);
      const double amp = level * uniform(rng, 2.0, 3.5);
      for (int i = 0; i < 400; ++i)
        audio[step + i] += amp * std::exp(-i / 120.0) * std::sin(2.0 * M_PI * f * i / kSampleRate);
      step += static_cast<std::size_t>(uniform(rng, 0.55, 0.9) * kSampleRate);
    }
  }

  AnnotatedRecording rec;
  rec.subject_id = subject_id;
  rec.condition = condition;
  for (const auto& p : placed) {
    LabeledEvent e;
    e.start_s = static_cast<double>(p.offset) / kSampleRate;
    e.end_s = static_cast<double>(p.offset + p.ev.samples.size()) / kSampleRate;
    e.cls = p.ev.cls;
    rec.events.push_back(e);
    for (std::size_t i = 0; i < p.ev.samples.size(); ++i) audio[p.offset + i] += p.ev.samples[i];
  }
  std::sort(rec.events.begin(), rec.events.end(),
            [](const LabeledEvent& a, const LabeledEvent& b) { return a.start_s < b.start_s; });

  for (auto role : canonical_channel_order(options.channels)) {
    Waveform w;
    w.sample_rate = kSampleRate;
    w.channel_role = role;
    if (role == ChannelRole::audio) {
      w.samples = audio;
    } else {
      // Contact channels: body-conducted, lowpassed rendition with its own
      // sensor noise.
      w.samples = audio;
      lowpass(w.samples, 900.0);
      auto sensor = white_noise(rng, total);
      for (std::size_t i = 0; i < total; ++i) w.samples[i] = 0.8 * w.samples[i] * 2.0 + 0.003 * sensor[i];
    }
    rec.channels.push_back(std::move(w));
  }
  normalize_peak(rec);
  return rec;
}

inline std::vector<AnnotatedRecording> generate_synthetic_corpus(std::uint64_t seed, int n_subjects,
                                                                 int sessions_per_subject,
                                                                 const SynthOptions& options = {}) {
  if (n_subjects <= 0 || sessions_per_subject <= 0)
    throw ValidationError("generate_synthetic_corpus: subject and session counts must be positive");
  std::vector<AnnotatedRecording> out;
  for (int s = 0; s < n_subjects; ++s) {
    char id[16];
    std::snprintf(id, sizeof(id), "S%02d", s + 1);
    for (int sess = 0; sess < sessions_per_subject; ++sess)
      out.push_back(synthesize_session(seed, id, s, sess, options));
  }
  return out;
}

}  // namespace coughdet
