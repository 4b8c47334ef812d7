// Corpus manifest: a UTF-8 JSON array of entries pointing at WAV and
// annotation files plus subject/session metadata.
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coughdet/types.hpp"

namespace coughdet {

struct ManifestEntry {
  std::string audio_path;
  std::string labels_path;
  std::string subject_id;
  SessionCondition condition = SessionCondition::quiet_sitting;
  std::vector<ChannelRole> channels;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;

  std::vector<std::string> subjects() const {
    std::vector<std::string> ids;
    for (const auto& e : entries)
      if (std::find(ids.begin(), ids.end(), e.subject_id) == ids.end()) ids.push_back(e.subject_id);
    return ids;
  }
};

inline CorpusManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("manifest " + path + ": invalid JSON (" + e.what() + ")");
  }
  if (!j.is_array()) throw ValidationError("manifest " + path + ": expected a JSON array");

  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return (fp.is_absolute() ? fp : base / fp).string();
  };

  CorpusManifest m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& o = j[i];
    auto where = "manifest " + path + " entry " + std::to_string(i);
    try {
      ManifestEntry e;
      e.audio_path = resolve(o.at("audio").get<std::string>());
      e.labels_path = resolve(o.at("labels").get<std::string>());
      e.subject_id = o.at("subject").get<std::string>();
      e.condition = condition_from_string(o.at("condition").get<std::string>());
      for (const auto& c : o.at("channels")) e.channels.push_back(channel_role_from_string(c.get<std::string>()));
      if (e.subject_id.empty()) throw ValidationError("empty subject id");
      if (e.channels.empty()) throw ValidationError("empty channel list");
      m.entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw ValidationError(where + ": " + ex.what());
    } catch (const ValidationError& ex) {
      throw ValidationError(where + ": " + ex.what());
    }
  }
  for (const auto& e : m.entries) {
    if (!std::filesystem::exists(e.audio_path)) throw IoError("manifest references missing file: " + e.audio_path);
    if (!std::filesystem::exists(e.labels_path)) throw IoError("manifest references missing file: " + e.labels_path);
  }
  return m;
}

inline void write_manifest(const std::string& path, const CorpusManifest& m,
                           bool relative_paths = true) {
  const auto base = std::filesystem::path(path).parent_path();
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : m.entries) {
    auto rel = [&](const std::string& p) {
      if (!relative_paths) return p;
      std::error_code ec;
      auto r = std::filesystem::relative(p, base, ec);
      return ec ? p : r.string();
    };
    nlohmann::json o;
    o["audio"] = rel(e.audio_path);
    o["labels"] = rel(e.labels_path);
    o["subject"] = e.subject_id;
    o["condition"] = to_string(e.condition);
    auto ch = nlohmann::json::array();
    for (auto r : e.channels) ch.push_back(to_string(r));
    o["channels"] = ch;
    j.push_back(o);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace coughdet
