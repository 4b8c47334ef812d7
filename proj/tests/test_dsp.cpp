#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>

#include "coughdet/framing.hpp"
#include "coughdet/spectrum.hpp"

using namespace coughdet;

namespace {

Waveform make_waveform(std::size_t n, double value = 0.0) {
  Waveform w;
  w.samples.assign(n, value);
  return w;
}

std::vector<double> sine_frame(double freq, double amplitude, std::size_t n, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amplitude * std::sin(2.0 * M_PI * freq * i / kSampleRate + phase);
  return x;
}

}  // namespace

TEST_CASE("frame counts follow the hop/window arithmetic") {
  CHECK(frame_signal(make_waveform(300)).n_frames == 1);
  CHECK(frame_signal(make_waveform(420)).n_frames == 2);
  CHECK(frame_signal(make_waveform(100000)).n_frames == 831);  // floor((100000-300)/120)+1
}

TEST_CASE("too-short waveforms name the minimum length") {
  try {
    frame_signal(make_waveform(299));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE(std::string(e.what()).find("300") != std::string::npos);
  }
}

TEST_CASE("frame k starts at sample 120k") {
  Waveform w = make_waveform(1000);
  std::iota(w.samples.begin(), w.samples.end(), 0.0);
  const auto grid = frame_signal(w);
  for (std::size_t k = 0; k < grid.n_frames; ++k) {
    const auto frame = frame_view(w, k);
    REQUIRE(frame.size() == 300);
    REQUIRE(frame[0] == static_cast<double>(120 * k));
  }
  REQUIRE(grid.frame_centers_s[0] == Catch::Approx(0.015));
}

TEST_CASE("all-zero frames give all-zero magnitudes") {
  const std::vector<double> zeros(kWindowSamples, 0.0);
  const auto spec = magnitude_spectrum(zeros);
  REQUIRE(spec.n_bins() == 257);
  for (double m : spec.magnitudes) REQUIRE(m == 0.0);
}

TEST_CASE("a 1 kHz tone peaks at bin 51") {
  const auto frame = sine_frame(1000.0, 1.0, kWindowSamples);
  const auto spec = magnitude_spectrum(frame);
  const auto peak = std::max_element(spec.magnitudes.begin(), spec.magnitudes.end());
  const int bin = static_cast<int>(peak - spec.magnitudes.begin());
  REQUIRE(bin == 51);  // 1000 / 19.53125 = 51.2
  REQUIRE(spec.magnitudes[bin] > spec.magnitudes[bin - 2]);
  REQUIRE(spec.magnitudes[bin] > spec.magnitudes[bin + 2]);
}

TEST_CASE("Parseval identity holds to 1e-9 relative") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> frame(kWindowSamples);
  for (auto& v : frame) v = u(rng);

  const auto& win = hamming_window();
  double time_energy = 0.0;
  for (int n = 0; n < kWindowSamples; ++n) time_energy += frame[n] * win[n] * frame[n] * win[n];

  const auto spec = magnitude_spectrum(frame);
  double freq_energy = spec.magnitudes[0] * spec.magnitudes[0] +
                       spec.magnitudes[256] * spec.magnitudes[256];
  for (int k = 1; k < 256; ++k) freq_energy += 2.0 * spec.magnitudes[k] * spec.magnitudes[k];
  freq_energy /= kFftSize;

  REQUIRE(std::abs(freq_energy - time_energy) <= 1e-9 * time_energy);
}

TEST_CASE("shifting the input by one hop shifts frames by one") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Waveform w = make_waveform(1500);
  for (auto& v : w.samples) v = u(rng);

  Waveform shifted;
  shifted.samples.assign(w.samples.begin() + kHopSamples, w.samples.end());

  const auto n = frame_signal(shifted).n_frames;
  for (std::size_t k = 0; k < n; ++k) {
    const auto a = magnitude_spectrum(frame_view(w, k + 1));
    const auto b = magnitude_spectrum(frame_view(shifted, k));
    REQUIRE(a.magnitudes == b.magnitudes);
  }
}

TEST_CASE("magnitudes are invariant to a sign flip of the input") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> frame(kWindowSamples), flipped(kWindowSamples);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    frame[i] = u(rng);
    flipped[i] = -frame[i];
  }
  const auto a = magnitude_spectrum(frame);
  const auto b = magnitude_spectrum(flipped);
  for (std::size_t k = 0; k < a.n_bins(); ++k)
    REQUIRE(a.magnitudes[k] == Catch::Approx(b.magnitudes[k]).margin(1e-12));
}

TEST_CASE("non-finite samples raise a numeric error") {
  std::vector<double> frame(kWindowSamples, 0.0);
  frame[17] = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(magnitude_spectrum(frame), NumericError);
}
