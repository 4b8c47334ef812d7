// Minimal RIFF/WAVE reader and writer. Supports little-endian PCM 16/24-bit
// integer and IEEE float 32-bit, mono or multi-channel.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "coughdet/common.hpp"

namespace coughdet {

struct WavData {
  int sample_rate = 0;
  // One vector per channel, samples scaled to [-1, 1].
  std::vector<std::vector<double>> channels;
};

namespace detail {

inline std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline void put_u32(std::vector<unsigned char>& v, std::uint32_t x) {
  v.push_back(x & 0xff);
  v.push_back((x >> 8) & 0xff);
  v.push_back((x >> 16) & 0xff);
  v.push_back((x >> 24) & 0xff);
}

inline void put_u16(std::vector<unsigned char>& v, std::uint16_t x) {
  v.push_back(x & 0xff);
  v.push_back((x >> 8) & 0xff);
}

}  // namespace detail

inline WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto fail = [&](const std::string& why) -> IoError {
    return IoError("malformed WAV file " + path + ": " + why);
  };
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw fail("missing RIFF/WAVE header");

  std::uint16_t format = 0, n_channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t data_off = 0, data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* p = bytes.data() + pos;
    std::uint32_t chunk_len = detail::read_u32(p + 4);
    if (std::memcmp(p, "fmt ", 4) == 0) {
      if (pos + 8 + 16 > bytes.size()) throw fail("truncated fmt chunk");
      format = detail::read_u16(p + 8);
      n_channels = detail::read_u16(p + 10);
      rate = detail::read_u32(p + 12);
      bits = detail::read_u16(p + 22);
      have_fmt = true;
    } else if (std::memcmp(p, "data", 4) == 0) {
      data_off = pos + 8;
      data_len = chunk_len;
      break;
    }
    pos += 8 + chunk_len + (chunk_len & 1);
  }
  if (!have_fmt || data_off == 0) throw fail("missing fmt or data chunk");
  if (data_off + data_len > bytes.size()) throw fail("data chunk exceeds file size");
  if (n_channels == 0 || rate == 0) throw fail("invalid channel count or sample rate");
  bool pcm16 = format == 1 && bits == 16;
  bool pcm24 = format == 1 && bits == 24;
  bool f32 = format == 3 && bits == 32;
  if (!pcm16 && !pcm24 && !f32)
    throw fail("unsupported encoding (format " + std::to_string(format) + ", " + std::to_string(bits) +
               " bits); expected PCM 16/24-bit or float 32-bit");

  std::size_t bytes_per = bits / 8;
  std::size_t frame_bytes = bytes_per * n_channels;
  std::size_t n_frames = data_len / frame_bytes;
  WavData wav;
  wav.sample_rate = static_cast<int>(rate);
  wav.channels.assign(n_channels, std::vector<double>(n_frames));
  const unsigned char* d = bytes.data() + data_off;
  for (std::size_t i = 0; i < n_frames; ++i) {
    for (std::uint16_t c = 0; c < n_channels; ++c) {
      const unsigned char* s = d + i * frame_bytes + c * bytes_per;
      double v;
      if (pcm16) {
        std::int16_t x = static_cast<std::int16_t>(s[0] | (s[1] << 8));
        v = x / 32768.0;
      } else if (pcm24) {
        std::int32_t x = s[0] | (s[1] << 8) | (s[2] << 16);
        if (x & 0x800000) x |= ~0xffffff;  // sign extend
        v = x / 8388608.0;
      } else {
        float fx;
        std::memcpy(&fx, s, 4);
        v = fx;
      }
      wav.channels[c][i] = v;
    }
  }
  return wav;
}

// Writes 16-bit PCM. Samples are clipped to [-1, 1] and rounded.
inline void write_wav(const std::string& path, const std::vector<std::vector<double>>& channels,
                      int sample_rate) {
  if (channels.empty()) throw ValidationError("write_wav: no channels");
  std::size_t n_frames = channels.front().size();
  for (const auto& c : channels)
    if (c.size() != n_frames) throw ValidationError("write_wav: channel length mismatch");
  std::uint16_t n_channels = static_cast<std::uint16_t>(channels.size());
  std::uint32_t data_len = static_cast<std::uint32_t>(n_frames * n_channels * 2);

  std::vector<unsigned char> out;
  out.reserve(44 + data_len);
  auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
  tag("RIFF");
  detail::put_u32(out, 36 + data_len);
  tag("WAVE");
  tag("fmt ");
  detail::put_u32(out, 16);
  detail::put_u16(out, 1);  // PCM
  detail::put_u16(out, n_channels);
  detail::put_u32(out, static_cast<std::uint32_t>(sample_rate));
  detail::put_u32(out, static_cast<std::uint32_t>(sample_rate) * n_channels * 2);
  detail::put_u16(out, n_channels * 2);
  detail::put_u16(out, 16);
  tag("data");
  detail::put_u32(out, data_len);
  for (std::size_t i = 0; i < n_frames; ++i) {
    for (std::uint16_t c = 0; c < n_channels; ++c) {
      long q = std::lround(channels[c][i] * 32768.0);
      q = std::clamp(q, -32768L, 32767L);
      detail::put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write WAV file: " + path);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("short write to WAV file: " + path);
}

}  // namespace coughdet
