#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <random>

#include "coughdet/features/extract.hpp"
#include "coughdet/features/matrix_io.hpp"

using namespace coughdet;

namespace {

Spectrum spectrum_of_constant(double value) {
  Spectrum s;
  s.magnitudes.assign(kNumBins, value);
  return s;
}

Spectrum spectrum_with_bin(int bin, double value) {
  Spectrum s;
  s.magnitudes.assign(kNumBins, 0.0);
  s.magnitudes[bin] = value;
  return s;
}

std::vector<double> sine_frame(double freq, double amplitude, std::size_t n = kWindowSamples) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amplitude * std::sin(2.0 * M_PI * freq * i / kSampleRate);
  return x;
}

std::vector<double> noise_frame(std::mt19937_64& rng, std::size_t n = kWindowSamples, double amplitude = 1.0) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace

// ---------------------------------------------------------------- MFCC ----

TEST_CASE("mfcc of an all-zero spectrum is the DCT of the constant log floor") {
  const auto c = mfcc(spectrum_of_constant(0.0));
  REQUIRE(c[0] == Catch::Approx(std::sqrt(26.0) * std::log(kEnergyFloor)).epsilon(1e-12));
  for (int j = 1; j < kNumMfcc; ++j) REQUIRE(c[j] == Catch::Approx(0.0).margin(1e-9));
}

namespace {

// Independent mel filterbank + DCT oracle, built from the declared defaults
// (26 triangular filters on the mel scale over 0-5000 Hz, orthonormal
// DCT-II) with its own code path.
std::vector<double> oracle_mfcc(const Spectrum& spec) {
  const int n_filters = 26;
  std::vector<double> points(n_filters + 2);
  const double mel_max = 2595.0 * std::log10(1.0 + 5000.0 / 700.0);
  for (int i = 0; i < n_filters + 2; ++i) {
    const double mel = mel_max * i / (n_filters + 1);
    points[i] = 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
  }
  std::vector<double> loge(n_filters);
  for (int f = 0; f < n_filters; ++f) {
    double acc = 0.0;
    for (int k = 0; k < kNumBins; ++k) {
      const double fk = k * kBinHz;
      double w = 0.0;
      if (fk > points[f] && fk < points[f + 1])
        w = (fk - points[f]) / (points[f + 1] - points[f]);
      else if (fk >= points[f + 1] && fk < points[f + 2])
        w = (points[f + 2] - fk) / (points[f + 2] - points[f + 1]);
      acc += 2.0 / (points[f + 2] - points[f]) * w * spec.magnitudes[k] * spec.magnitudes[k];
    }
    loge[f] = std::log(std::max(acc, 1e-10));
  }
  std::vector<double> c(kNumMfcc, 0.0);
  for (int j = 0; j < kNumMfcc; ++j) {
    for (int i = 0; i < n_filters; ++i) c[j] += loge[i] * std::cos(M_PI * j * (2.0 * i + 1.0) / (2.0 * n_filters));
    c[j] *= j == 0 ? std::sqrt(1.0 / n_filters) : std::sqrt(2.0 / n_filters);
  }
  return c;
}

}  // namespace

TEST_CASE("mfcc of a flat spectrum matches the filterbank oracle, c1..c20 small") {
  const auto spec = spectrum_of_constant(1.0);
  const auto c = mfcc(spec);
  const auto expected = oracle_mfcc(spec);
  for (int j = 0; j < kNumMfcc; ++j) REQUIRE(c[j] == Catch::Approx(expected[j]).margin(1e-9));
  for (int j = 1; j < kNumMfcc; ++j) REQUIRE(std::abs(c[j]) < 0.05 * std::abs(c[0]));
}

TEST_CASE("doubling a noise frame shifts only c0, by sqrt(26) log 4") {
  std::mt19937_64 rng(5);
  const auto frame = noise_frame(rng);
  auto spec = magnitude_spectrum(frame);
  Spectrum doubled = spec;
  for (auto& m : doubled.magnitudes) m *= 2.0;
  const auto a = mfcc(spec);
  const auto b = mfcc(doubled);
  REQUIRE(b[0] - a[0] == Catch::Approx(std::sqrt(26.0) * std::log(4.0)).margin(1e-9));
  for (int j = 1; j < kNumMfcc; ++j) REQUIRE(b[j] == Catch::Approx(a[j]).margin(1e-9));
}

// ------------------------------------------------------- Bark loudness ----

TEST_CASE("bark loudness of silence is zero everywhere") {
  const auto loud = bark_loudness(spectrum_of_constant(0.0));
  for (double v : loud) REQUIRE(v == 0.0);
}

TEST_CASE("a 1 kHz tone is loudest in the Bark band containing 1 kHz") {
  const auto spec = magnitude_spectrum(sine_frame(1000.0, 1.0));
  const auto loud = bark_loudness(spec);
  const auto& edges = bark_edges_hz();
  int expected_band = -1;
  for (int b = 0; b < kNumBarkBands; ++b)
    if (1000.0 >= edges[b] && 1000.0 < edges[b + 1]) expected_band = b;
  REQUIRE(expected_band >= 0);
  const int argmax = static_cast<int>(std::max_element(loud.begin(), loud.end()) - loud.begin());
  REQUIRE(argmax == expected_band);
}

TEST_CASE("doubling amplitude scales loudness by 4^0.23") {
  const auto spec = magnitude_spectrum(sine_frame(700.0, 0.5));
  Spectrum doubled = spec;
  for (auto& m : doubled.magnitudes) m *= 2.0;
  const auto a = bark_loudness(spec);
  const auto b = bark_loudness(doubled);
  for (int i = 0; i < kNumBarkBands; ++i) {
    if (a[i] <= 0.0) continue;
    REQUIRE(b[i] / a[i] == Catch::Approx(std::pow(4.0, 0.23)).epsilon(1e-9));
  }
}

// ---------------------------------------------------- subband energies ----

TEST_CASE("zero frame yields the uniform subband vector") {
  const auto e = relative_subband_energy(spectrum_of_constant(0.0));
  for (double v : e) REQUIRE(v == Catch::Approx(1.0 / 16.0));
}

TEST_CASE("a 1 kHz tone concentrates in the band covering 937.5-1250 Hz") {
  const auto spec = magnitude_spectrum(sine_frame(1000.0, 1.0));
  const auto e = relative_subband_energy(spec);
  int band = -1;
  for (int b = 0; b < kNumSubbands; ++b)
    if (1000.0 >= b * kSubbandWidthHz && 1000.0 < (b + 1) * kSubbandWidthHz) band = b;
  REQUIRE(e[band] > 0.9);
}

TEST_CASE("subband energies always sum to one") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = magnitude_spectrum(noise_frame(rng));
    const auto e = relative_subband_energy(spec);
    double sum = 0.0;
    for (double v : e) sum += v;
    REQUIRE(sum == Catch::Approx(1.0).margin(1e-9));
  }
}

// ------------------------------------------------------ spectral shape ----

TEST_CASE("a point mass at 1 kHz has centroid 1000 Hz and zero spread") {
  const auto spec = spectrum_with_bin(51, 3.0);  // 51 * 19.53125 = 996.09 Hz
  const auto shape = spectral_shape(spec, spectrum_of_constant(0.0));
  REQUIRE(std::abs(shape.centroid_hz - 1000.0) <= kBinHz);
  REQUIRE(shape.spread_hz == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("identical successive spectra give zero variation and flux") {
  std::mt19937_64 rng(3);
  const auto spec = magnitude_spectrum(noise_frame(rng));
  const auto shape = spectral_shape(spec, spec);
  REQUIRE(shape.variation == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(shape.flux == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("a flat spectrum has centroid at the 2500 Hz midpoint") {
  const auto shape = spectral_shape(spectrum_of_constant(1.0), spectrum_of_constant(0.0));
  REQUIRE(std::abs(shape.centroid_hz - 2500.0) <= kBinHz);
}

// --------------------------------------------- energy and total loudness ----

TEST_CASE("a zero frame reads the log floor and zero loudness") {
  const std::vector<double> zeros(kWindowSamples, 0.0);
  const auto bark = bark_loudness(spectrum_of_constant(0.0));
  const auto [e, loud] = energy_and_total_loudness(zeros, std::span<const double>(bark.data(), bark.size()));
  REQUIRE(e == Catch::Approx(std::log(kEnergyFloor)));
  REQUIRE(loud == 0.0);
}

TEST_CASE("scaling samples by 10 raises log energy by exactly 2 log 10") {
  const auto frame = sine_frame(500.0, 0.1);
  auto scaled = frame;
  for (auto& v : scaled) v *= 10.0;
  const std::array<double, kNumBarkBands> bark{};
  const auto [e1, l1] = energy_and_total_loudness(frame, std::span<const double>(bark.data(), bark.size()));
  const auto [e2, l2] = energy_and_total_loudness(scaled, std::span<const double>(bark.data(), bark.size()));
  REQUIRE(e2 - e1 == Catch::Approx(2.0 * std::log(10.0)).margin(1e-12));
}

TEST_CASE("total loudness equals the sum of the bark loudness vector") {
  std::mt19937_64 rng(23);
  const auto frame = noise_frame(rng);
  const auto bark = bark_loudness(magnitude_spectrum(frame));
  const auto [e, loud] = energy_and_total_loudness(frame, std::span<const double>(bark.data(), bark.size()));
  double sum = 0.0;
  for (double v : bark) sum += v;
  REQUIRE(loud == Catch::Approx(sum).margin(1e-12));
}

// -------------------------------------------------------------- HNR -------

TEST_CASE("hnr formula maps r = 0.5 to exactly 0 dB") {
  REQUIRE(hnr_from_autocorr_peak(0.5) == 0.0);
  REQUIRE(hnr_from_autocorr_peak(1.0) == 40.0);
  REQUIRE(hnr_from_autocorr_peak(0.0) == -40.0);
}

TEST_CASE("a pure 200 Hz sine clamps band-1 HNR at +40 dB") {
  const auto frame = sine_frame(200.0, 0.8);
  const auto hnr = hnr_bands(frame);
  REQUIRE(hnr[0] == 40.0);
}

TEST_CASE("white noise has negative expected HNR in every band") {
  std::mt19937_64 rng(99);
  std::array<double, kNumNoiseBands> mean{};
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const auto hnr = hnr_bands(noise_frame(rng));
    for (int b = 0; b < kNumNoiseBands; ++b) mean[b] += hnr[b];
  }
  for (int b = 0; b < kNumNoiseBands; ++b) REQUIRE(mean[b] / trials < 0.0);
}

// ---------------------------------------------------------- flatness ------

TEST_CASE("flat spectra have flatness 1 in all bands") {
  const auto flat = spectral_flatness_bands(spectrum_of_constant(0.7));
  for (double v : flat) REQUIRE(v == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("a single-bin tone drives its band's flatness toward zero") {
  const auto spec = spectrum_with_bin(51, 5.0);  // inside 500-1500 Hz
  const auto flat = spectral_flatness_bands(spec);
  REQUIRE(flat[1] < 0.05);

  // cross-check against a direct geometric/arithmetic mean computation
  double log_sum = 0.0, sum = 0.0;
  int count = 0;
  for (int k = 26; k <= 76; ++k) {  // bins with center in [500, 1500)
    const double p = std::max(spec.magnitudes[k] * spec.magnitudes[k], kEnergyFloor);
    log_sum += std::log(p);
    sum += p;
    ++count;
  }
  const double expected = std::exp(log_sum / count) / (sum / count);
  REQUIRE(flat[1] == Catch::Approx(expected).epsilon(1e-9));
}

TEST_CASE("flatness stays within (0, 1]") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    const auto flat = spectral_flatness_bands(magnitude_spectrum(noise_frame(rng)));
    for (double v : flat) {
      REQUIRE(v > 0.0);
      REQUIRE(v <= 1.0);
    }
  }
}

// ---------------------------------------------------------------- ZCR ------

TEST_CASE("zero-crossing rate extremes") {
  std::vector<double> constant(kWindowSamples, 0.4);
  REQUIRE(zero_crossing_rate(constant) == 0.0);

  std::vector<double> alternating(kWindowSamples);
  for (std::size_t i = 0; i < alternating.size(); ++i) alternating[i] = i % 2 == 0 ? 1.0 : -1.0;
  REQUIRE(zero_crossing_rate(alternating) == 1.0);
}

TEST_CASE("a 1 kHz tone crosses zero at rate 0.2") {
  REQUIRE(zero_crossing_rate(sine_frame(1000.0, 1.0)) == Catch::Approx(0.2).margin(0.01));
}

// ---------------------------------------------------------------- SRH ------

namespace {

std::vector<double> impulse_train(double f0, std::size_t n) {
  // Band-limited impulse train: equal-amplitude harmonics up to 4.5 kHz.
  std::vector<double> x(n, 0.0);
  const int n_harm = static_cast<int>(4500.0 / f0);
  for (int h = 1; h <= n_harm; ++h)
    for (std::size_t i = 0; i < n; ++i) x[i] += std::cos(2.0 * M_PI * f0 * h * i / kSampleRate) / n_harm;
  return x;
}

}  // namespace

TEST_CASE("srh locks onto a 150 Hz impulse train") {
  const auto context = impulse_train(150.0, kSrhContextSamples);
  const auto result = srh_f0_and_periodicity(context);
  REQUIRE(std::abs(result.f0_hz - 150.0) <= 5.0);
  REQUIRE(result.periodicity > 0.5);
}

TEST_CASE("white noise has low expected periodicity") {
  std::mt19937_64 rng(123);
  double mean = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t)
    mean += srh_f0_and_periodicity(noise_frame(rng, kSrhContextSamples)).periodicity;
  REQUIRE(mean / trials < 0.2);
}

TEST_CASE("silence reports zero periodicity by the energy-floor convention") {
  const std::vector<double> zeros(kSrhContextSamples, 0.0);
  const auto result = srh_f0_and_periodicity(zeros);
  REQUIRE(result.periodicity == 0.0);
  REQUIRE(result.f0_hz == 0.0);
}

// -------------------------------------------------------- chirp group delay

TEST_CASE("an impulse at the frame start has zero group delay") {
  std::vector<double> frame(kWindowSamples, 0.0);
  frame[0] = 1.0;
  REQUIRE(chirp_group_delay(frame) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("a delayed impulse has mean group delay equal to its delay") {
  for (int d : {5, 40, 120}) {
    std::vector<double> frame(kWindowSamples, 0.0);
    frame[d] = 1.0;
    const auto profile = chirp_group_delay_profile(frame);
    double mean = 0.0;
    for (double v : profile) mean += v;
    mean /= static_cast<double>(profile.size());
    REQUIRE(mean == Catch::Approx(static_cast<double>(d)).margin(0.01));
    REQUIRE(chirp_group_delay(frame) == Catch::Approx(0.0).margin(1e-6));
  }
}

TEST_CASE("the group-delay summary is finite for white noise") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 20; ++t) REQUIRE(std::isfinite(chirp_group_delay(noise_frame(rng))));
}

// ------------------------------------------------------------ derivatives --

TEST_CASE("derivatives of constant sequences vanish") {
  const std::vector<double> constant(40, 3.25);
  const auto d1 = delta_sequence(constant);
  const auto d2 = delta_sequence(d1);
  for (double v : d1) REQUIRE(v == Catch::Approx(0.0).margin(1e-15));
  for (double v : d2) REQUIRE(v == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("the 5-point slope is exact on lines away from the edges") {
  const double slope = 0.37;
  std::vector<double> line(50);
  for (std::size_t i = 0; i < line.size(); ++i) line[i] = 1.5 + slope * static_cast<double>(i);
  const auto d1 = delta_sequence(line);
  const auto d2 = delta_sequence(d1);
  for (std::size_t i = 2; i + 2 < line.size(); ++i) REQUIRE(d1[i] == Catch::Approx(slope).margin(1e-12));
  for (std::size_t i = 4; i + 4 < line.size(); ++i) REQUIRE(d2[i] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("delta is odd under sign flip") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(30), neg(30);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = u(rng);
    neg[i] = -x[i];
  }
  const auto dx = delta_sequence(x);
  const auto dn = delta_sequence(neg);
  for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(dn[i] == Catch::Approx(-dx[i]).margin(1e-15));
}

// -------------------------------------------------------------- extraction --

namespace {

AnnotatedRecording noise_recording(double seconds, double amplitude, std::uint64_t seed,
                                   std::vector<LabeledEvent> events = {}) {
  AnnotatedRecording rec;
  rec.subject_id = "T01";
  Waveform w;
  w.sample_rate = kSampleRate;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  w.samples.resize(static_cast<std::size_t>(seconds * kSampleRate));
  for (auto& v : w.samples) v = u(rng);
  rec.channels.push_back(std::move(w));
  rec.events = std::move(events);
  return rec;
}

}  // namespace

TEST_CASE("catalog counts: 74 base, 222 per channel, 444 for two channels") {
  const auto mono = build_catalog({ChannelRole::audio});
  REQUIRE(mono.size() == 222);
  int base = 0;
  for (const auto& e : mono.entries) base += e.derivative == 0;
  REQUIRE(base == 74);

  const auto dual = build_catalog({ChannelRole::contact_trachea, ChannelRole::audio});
  REQUIRE(dual.size() == 444);
  REQUIRE(dual.channels.front() == ChannelRole::audio);  // role order, audio first
  REQUIRE(mono.hash() != dual.hash());
}

TEST_CASE("extraction yields 222 columns for audio, 444 with a contact channel") {
  auto rec = noise_recording(1.0, 0.3, 21);
  Waveform contact = rec.channels[0];
  contact.channel_role = ChannelRole::contact_trachea;
  rec.channels.push_back(std::move(contact));

  const auto mono = extract_features(rec, {ChannelRole::audio});
  REQUIRE(mono.n_cols == 222);
  const auto dual = extract_features(rec, {ChannelRole::audio, ChannelRole::contact_trachea});
  REQUIRE(dual.n_cols == 444);
  REQUIRE(mono.n_frames == dual.n_frames);

  REQUIRE_THROWS_AS(extract_features(rec, {ChannelRole::contact_thorax}), ConfigError);
}

TEST_CASE("frame labels use the window midpoint; explosive covers the first 60 ms") {
  std::vector<LabeledEvent> events = {{1.0, 1.3, EventClass::cough}};
  REQUIRE(frame_label(events, 1.030) == EventClass::cough);
  REQUIRE(frame_is_explosive(events, 1.030));
  REQUIRE(frame_label(events, 1.090) == EventClass::cough);
  REQUIRE_FALSE(frame_is_explosive(events, 1.090));
  REQUIRE(frame_label(events, 0.5) == EventClass::background);
  REQUIRE_FALSE(frame_is_explosive(events, 1.060));
  REQUIRE(frame_is_explosive(events, 1.0599));
}

TEST_CASE("extraction is deterministic bit for bit") {
  const auto rec = noise_recording(0.8, 0.4, 101);
  const auto a = extract_features(rec, {ChannelRole::audio});
  const auto b = extract_features(rec, {ChannelRole::audio});
  REQUIRE(a.values == b.values);
}

TEST_CASE("an all-zero recording produces finite features everywhere") {
  AnnotatedRecording rec;
  rec.subject_id = "Z";
  Waveform w;
  w.samples.assign(5000, 0.0);
  rec.channels.push_back(std::move(w));
  const auto m = extract_features(rec, {ChannelRole::audio});
  for (float v : m.values) REQUIRE(std::isfinite(v));
}

TEST_CASE("gain covariance: invariant descriptors and known laws") {
  auto rec = noise_recording(0.8, 0.25, 55);
  // add a tone so harmonicity features see structure
  for (std::size_t i = 0; i < rec.channels[0].samples.size(); ++i)
    rec.channels[0].samples[i] += 0.2 * std::sin(2.0 * M_PI * 220.0 * i / kSampleRate);
  auto scaled = rec;
  for (auto& v : scaled.channels[0].samples) v *= 2.0;

  const auto base_cat = build_catalog({ChannelRole::audio});
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < base_cat.entries.size(); ++i)
      if (base_cat.entries[i].name == "audio/" + name) return i;
    throw std::runtime_error("missing column " + name);
  };

  const auto a = extract_features(rec, {ChannelRole::audio});
  const auto b = extract_features(scaled, {ChannelRole::audio});

  std::vector<std::string> invariant = {"spectral_centroid_hz", "spectral_spread_hz", "spectral_variation",
                                        "spectral_flux",        "zcr",               "periodicity",
                                        "chirp_gd_std"};
  for (int i = 1; i < kNumMfcc; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "mfcc_%02d", i);
    invariant.push_back(buf);
  }
  for (int i = 0; i < kNumSubbands; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "subband_energy_%02d", i);
    invariant.push_back(buf);
  }
  for (int i = 0; i < kNumNoiseBands; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "flatness_%02d", i);
    invariant.push_back(buf);
  }
  for (const auto& name : invariant) {
    const auto col = index_of(name);
    for (std::size_t k = 0; k < a.n_frames; ++k) {
      const double va = a.at(k, col), vb = b.at(k, col);
      REQUIRE(vb == Catch::Approx(va).epsilon(1e-4).margin(1e-4));
    }
  }

  const auto e_col = index_of("log_energy");
  const auto c0_col = index_of("mfcc_00");
  const auto loud_col = index_of("total_loudness");
  for (std::size_t k = 0; k < a.n_frames; ++k) {
    REQUIRE(b.at(k, e_col) - a.at(k, e_col) == Catch::Approx(2.0 * std::log(2.0)).margin(1e-4));
    REQUIRE(b.at(k, c0_col) - a.at(k, c0_col) ==
            Catch::Approx(std::sqrt(26.0) * std::log(4.0)).margin(1e-3));
    REQUIRE(b.at(k, loud_col) / a.at(k, loud_col) == Catch::Approx(std::pow(4.0, 0.23)).epsilon(1e-4));
  }
}

TEST_CASE("feature matrix files round trip") {
  std::vector<LabeledEvent> events = {{0.2, 0.5, EventClass::cough}, {0.6, 0.75, EventClass::laugh}};
  const auto rec = noise_recording(1.0, 0.3, 71, events);
  const auto m = extract_features(rec, {ChannelRole::audio});

  const auto dir = std::filesystem::temp_directory_path() / "coughdet_feature_io";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "m.cdfm").string();
  write_feature_matrix(path, m);
  const auto r = read_feature_matrix(path);
  REQUIRE(r.n_frames == m.n_frames);
  REQUIRE(r.n_cols == m.n_cols);
  REQUIRE(r.values == m.values);
  REQUIRE(r.labels == m.labels);
  REQUIRE(r.explosive == m.explosive);
  REQUIRE(r.subject_id == m.subject_id);
  REQUIRE(r.catalog_hash == m.catalog_hash);
  REQUIRE(r.duration_s == Catch::Approx(m.duration_s));

  const auto csv_path = (dir / "m.csv").string();
  write_feature_csv(csv_path, m, build_catalog({ChannelRole::audio}));
  std::ifstream csv(csv_path);
  std::string header;
  std::getline(csv, header);
  REQUIRE(header.find("audio/mfcc_00") != std::string::npos);
}
