// Model file format: JSON header (dims, task, catalog hash, selection)
// followed by a little-endian 64-bit float parameter block.
#pragma once

#include <cstring>
#include <fstream>
#include <sstream>

#include "coughdet/features/matrix_io.hpp"
#include "coughdet/mlp.hpp"

namespace coughdet {

// A trained stage: the network plus the feature selection it consumes.
struct StageModel {
  MlpModel mlp;
  SelectedFeatureSet selection;
};

inline void write_stage_model(std::ostream& out, const StageModel& s) {
  nlohmann::json j;
  j["format"] = "coughdet-model";
  j["version"] = 1;
  j["task"] = s.mlp.task;
  j["input_dim"] = s.mlp.input_dim;
  j["hidden_dim"] = kHiddenUnits;
  j["catalog_hash"] = s.mlp.catalog_hash;
  j["selection"] = selection_to_json(s.selection);
  const std::string header = j.dump();
  out.write("CDNN", 4);
  detail::write_u32(out, static_cast<std::uint32_t>(header.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  auto block = [&](const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  block(s.mlp.norm_mean);
  block(s.mlp.norm_std);
  block(s.mlp.w1);
  block(s.mlp.b1);
  block(s.mlp.w2);
  out.write(reinterpret_cast<const char*>(&s.mlp.b2), sizeof(double));
}

inline void write_stage_model(const std::string& path, const StageModel& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file: " + path);
  write_stage_model(out, s);
  if (!out) throw IoError("short write to model file: " + path);
}

inline std::string stage_model_bytes(const StageModel& s) {
  std::ostringstream out(std::ios::binary);
  write_stage_model(out, s);
  return out.str();
}

inline StageModel read_stage_model(std::istream& in, const std::string& path) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "CDNN", 4) != 0) throw IoError("not a coughdet model file: " + path);
  const std::uint32_t header_len = detail::read_u32(in, path);
  std::string header(header_len, '\0');
  in.read(header.data(), header_len);
  if (!in) throw IoError("truncated model file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt model file header: " + path + " (" + e.what() + ")");
  }
  StageModel s;
  s.mlp.task = j.at("task").get<std::string>();
  s.mlp.input_dim = j.at("input_dim").get<int>();
  s.mlp.catalog_hash = j.at("catalog_hash").get<std::string>();
  s.selection = selection_from_json(j.at("selection"));
  const int dim = s.mlp.input_dim;
  auto block = [&](std::vector<double>& v, std::size_t count) {
    v.resize(count);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(double)));
  };
  block(s.mlp.norm_mean, dim);
  block(s.mlp.norm_std, dim);
  block(s.mlp.w1, static_cast<std::size_t>(kHiddenUnits) * dim);
  block(s.mlp.b1, kHiddenUnits);
  block(s.mlp.w2, kHiddenUnits);
  in.read(reinterpret_cast<char*>(&s.mlp.b2), sizeof(double));
  if (!in) throw IoError("truncated model file: " + path);
  return s;
}

inline StageModel load_stage_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  return read_stage_model(in, path);
}

}  // namespace coughdet
