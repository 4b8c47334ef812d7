// Shared constants, error types and small utilities used across the library.
#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace coughdet {

// All analysis runs at 10 kHz with 30 ms windows hopped every 12 ms.
inline constexpr int kSampleRate = 10000;
inline constexpr int kHopSamples = 120;
inline constexpr int kWindowSamples = 300;
inline constexpr int kFftSize = 512;
inline constexpr int kNumBins = kFftSize / 2 + 1;
inline constexpr double kBinHz = static_cast<double>(kSampleRate) / kFftSize;
inline constexpr double kHopSeconds = 0.012;
inline constexpr double kWindowSeconds = 0.030;

// Floor applied to energies before logs so silence stays finite.
inline constexpr double kEnergyFloor = 1e-10;

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// splitmix64 step; used to derive independent sub-seeds deterministically.
inline std::uint64_t mix_seed(std::uint64_t state) {
  std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix_seed(mix_seed(base) ^ (stream * 0x9e3779b97f4a7c15ULL + 1));
}

inline std::uint64_t derive_seed(std::uint64_t base, const std::string& tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(base, h);
}

// FNV-1a over a byte string; used for catalog fingerprints.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work items must be
// independent; results land in caller-owned slots so the output does not
// depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::size_t n_threads = std::min<std::size_t>(n, static_cast<std::size_t>(jobs));
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline int default_jobs() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace coughdet
