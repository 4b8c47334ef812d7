// Feature catalog: the stable, serialized ordering of all per-frame
// descriptors. 74 base descriptors per channel, 222 with first and second
// derivatives; multi-channel configurations concatenate per-channel blocks
// in role order (audio first).
#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coughdet/features/noise.hpp"
#include "coughdet/features/spectral.hpp"
#include "coughdet/types.hpp"

namespace coughdet {

inline constexpr int kNumBaseFeatures = 74;
inline constexpr int kNumFeaturesPerChannel = 3 * kNumBaseFeatures;  // 222

struct CatalogEntry {
  std::string name;        // e.g. "audio/d1_mfcc_03"
  ChannelRole channel = ChannelRole::audio;
  int derivative = 0;      // 0 base, 1 delta, 2 delta-delta
  int base_index = 0;      // 0..73
  double band_lo_hz = -1.0;
  double band_hi_hz = -1.0;
};

struct FeatureCatalog {
  std::vector<CatalogEntry> entries;
  std::vector<ChannelRole> channels;

  std::size_t size() const { return entries.size(); }

  nlohmann::json to_json() const {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& e : entries) {
      nlohmann::json o;
      o["name"] = e.name;
      o["channel"] = to_string(e.channel);
      o["derivative"] = e.derivative;
      o["base_index"] = e.base_index;
      if (e.band_lo_hz >= 0.0) {
        o["band_lo_hz"] = e.band_lo_hz;
        o["band_hi_hz"] = e.band_hi_hz;
      }
      cols.push_back(o);
    }
    nlohmann::json j;
    j["columns"] = cols;
    auto ch = nlohmann::json::array();
    for (auto r : channels) ch.push_back(to_string(r));
    j["channels"] = ch;
    return j;
  }

  std::string hash() const { return fnv1a_hex(to_json().dump()); }
};

namespace detail {

struct BaseDescriptor {
  std::string name;
  double lo = -1.0, hi = -1.0;
};

inline std::vector<BaseDescriptor> base_descriptors() {
  std::vector<BaseDescriptor> d;
  d.reserve(kNumBaseFeatures);
  char buf[64];
  for (int i = 0; i < kNumMfcc; ++i) {
    std::snprintf(buf, sizeof(buf), "mfcc_%02d", i);
    d.push_back({buf});
  }
  const auto& bark = bark_edges_hz();
  for (int i = 0; i < kNumBarkBands; ++i) {
    std::snprintf(buf, sizeof(buf), "bark_loudness_%02d", i);
    d.push_back({buf, bark[i], bark[i + 1]});
  }
  for (int i = 0; i < kNumSubbands; ++i) {
    std::snprintf(buf, sizeof(buf), "subband_energy_%02d", i);
    d.push_back({buf, i * kSubbandWidthHz, (i + 1) * kSubbandWidthHz});
  }
  d.push_back({"spectral_centroid_hz"});
  d.push_back({"spectral_spread_hz"});
  d.push_back({"spectral_decrease"});
  d.push_back({"spectral_variation"});
  d.push_back({"spectral_flux"});
  d.push_back({"log_energy"});
  d.push_back({"total_loudness"});
  const auto& nb = noise_band_edges_hz();
  for (int i = 0; i < kNumNoiseBands; ++i) {
    std::snprintf(buf, sizeof(buf), "hnr_db_%02d", i);
    d.push_back({buf, nb[i], nb[i + 1]});
  }
  for (int i = 0; i < kNumNoiseBands; ++i) {
    std::snprintf(buf, sizeof(buf), "flatness_%02d", i);
    d.push_back({buf, nb[i], nb[i + 1]});
  }
  d.push_back({"zcr"});
  d.push_back({"f0_hz"});
  d.push_back({"periodicity"});
  d.push_back({"chirp_gd_std"});
  return d;
}

}  // namespace detail

inline FeatureCatalog build_catalog(const std::vector<ChannelRole>& requested) {
  const auto base = detail::base_descriptors();
  if (base.size() != kNumBaseFeatures)
    throw NumericError("catalog: expected " + std::to_string(kNumBaseFeatures) + " base descriptors, got " +
                       std::to_string(base.size()));
  FeatureCatalog cat;
  cat.channels = canonical_channel_order(requested);
  if (cat.channels.empty()) throw ValidationError("catalog: at least one channel role required");
  static const char* prefix[3] = {"", "d1_", "d2_"};
  for (auto role : cat.channels) {
    for (int deriv = 0; deriv < 3; ++deriv) {
      for (int i = 0; i < kNumBaseFeatures; ++i) {
        CatalogEntry e;
        e.name = std::string(to_string(role)) + "/" + prefix[deriv] + base[i].name;
        e.channel = role;
        e.derivative = deriv;
        e.base_index = i;
        e.band_lo_hz = base[i].lo;
        e.band_hi_hz = base[i].hi;
        cat.entries.push_back(std::move(e));
      }
    }
  }
  if (cat.entries.size() != cat.channels.size() * kNumFeaturesPerChannel)
    throw NumericError("catalog: column count mismatch");
  for (std::size_t i = 0; i < cat.entries.size(); ++i)
    for (std::size_t j = i + 1; j < cat.entries.size(); ++j)
      if (cat.entries[i].name == cat.entries[j].name)
        throw NumericError("catalog: duplicate column name " + cat.entries[i].name);
  return cat;
}

inline void write_catalog(const std::string& path, const FeatureCatalog& cat) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write catalog: " + path);
  auto j = cat.to_json();
  j["hash"] = cat.hash();
  out << j.dump(2) << "\n";
}

}  // namespace coughdet
