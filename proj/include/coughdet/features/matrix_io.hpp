// FeatureMatrix serialization: columnar binary file with a JSON header and a
// little-endian float32 payload, plus a CSV export for debugging.
#pragma once

#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "coughdet/features/extract.hpp"

namespace coughdet {

namespace detail {

inline void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t read_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw IoError("truncated feature file: " + path);
  return static_cast<std::uint32_t>(b[0]) | (b[1] << 8) | (b[2] << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace detail

inline void write_feature_matrix(const std::string& path, const FeatureMatrix& m) {
  nlohmann::json j;
  j["format"] = "coughdet-features";
  j["version"] = 1;
  j["n_frames"] = m.n_frames;
  j["n_cols"] = m.n_cols;
  j["subject"] = m.subject_id;
  j["condition"] = to_string(m.condition);
  j["catalog_hash"] = m.catalog_hash;
  j["hop_s"] = m.hop_s;
  j["window_s"] = m.window_s;
  j["duration_s"] = m.duration_s;
  auto ch = nlohmann::json::array();
  for (auto r : m.channels) ch.push_back(to_string(r));
  j["channels"] = ch;
  const std::string header = j.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write feature file: " + path);
  out.write("CDFM", 4);
  detail::write_u32(out, static_cast<std::uint32_t>(header.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(m.values.data()),
            static_cast<std::streamsize>(m.values.size() * sizeof(float)));
  std::vector<std::uint8_t> labels(m.n_frames);
  for (std::size_t i = 0; i < m.n_frames; ++i) labels[i] = static_cast<std::uint8_t>(m.labels[i]);
  out.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
  out.write(reinterpret_cast<const char*>(m.explosive.data()),
            static_cast<std::streamsize>(m.explosive.size()));
  if (!out) throw IoError("short write to feature file: " + path);
}

inline FeatureMatrix read_feature_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open feature file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "CDFM", 4) != 0)
    throw IoError("not a coughdet feature file: " + path);
  const std::uint32_t header_len = detail::read_u32(in, path);
  std::string header(header_len, '\0');
  in.read(header.data(), header_len);
  if (!in) throw IoError("truncated feature file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt feature file header: " + path + " (" + e.what() + ")");
  }
  FeatureMatrix m;
  m.n_frames = j.at("n_frames").get<std::size_t>();
  m.n_cols = j.at("n_cols").get<std::size_t>();
  m.subject_id = j.at("subject").get<std::string>();
  m.condition = condition_from_string(j.at("condition").get<std::string>());
  m.catalog_hash = j.at("catalog_hash").get<std::string>();
  m.hop_s = j.at("hop_s").get<double>();
  m.window_s = j.at("window_s").get<double>();
  m.duration_s = j.at("duration_s").get<double>();
  for (const auto& c : j.at("channels")) m.channels.push_back(channel_role_from_string(c.get<std::string>()));

  m.values.resize(m.n_frames * m.n_cols);
  in.read(reinterpret_cast<char*>(m.values.data()),
          static_cast<std::streamsize>(m.values.size() * sizeof(float)));
  std::vector<std::uint8_t> labels(m.n_frames);
  in.read(reinterpret_cast<char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
  m.explosive.resize(m.n_frames);
  in.read(reinterpret_cast<char*>(m.explosive.data()), static_cast<std::streamsize>(m.explosive.size()));
  if (!in) throw IoError("truncated feature file: " + path);
  m.labels.resize(m.n_frames);
  for (std::size_t i = 0; i < m.n_frames; ++i) {
    if (labels[i] >= kNumEventClasses) throw IoError("corrupt label byte in feature file: " + path);
    m.labels[i] = static_cast<EventClass>(labels[i]);
  }
  return m;
}

inline void write_feature_csv(const std::string& path, const FeatureMatrix& m, const FeatureCatalog& cat) {
  if (cat.size() != m.n_cols) throw ConfigError("write_feature_csv: catalog does not match matrix");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write feature CSV: " + path);
  out << "frame,time_s,label,explosive";
  for (const auto& e : cat.entries) out << "," << e.name;
  out << "\n";
  char buf[64];
  for (std::size_t k = 0; k < m.n_frames; ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.6f,%s,%d", k, m.frame_midpoint_s(k), to_string(m.labels[k]),
                  static_cast<int>(m.explosive[k]));
    out << buf;
    for (std::size_t c = 0; c < m.n_cols; ++c) {
      std::snprintf(buf, sizeof(buf), ",%.9g", static_cast<double>(m.at(k, c)));
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace coughdet
