// Mutual-information feature selection: equal-frequency discretization, a
// plug-in MI estimate and a greedy criterion that trades relevance against
// mean redundancy with the already-selected subset.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coughdet/common.hpp"

namespace coughdet {

inline constexpr int kDefaultBins = 32;
inline constexpr int kDefaultSelectionSize = 50;

struct DiscretizedMatrix {
  std::size_t n_rows = 0;
  std::size_t n_features = 0;
  int n_bins = kDefaultBins;
  // Column-major bin indices: feature f occupies [f*n_rows, (f+1)*n_rows).
  std::vector<std::uint8_t> bins;
  std::vector<std::vector<double>> edges;  // per feature, strictly increasing
  std::vector<std::uint8_t> degenerate;    // 1 when the feature was constant

  const std::uint8_t* column(std::size_t f) const { return &bins[f * n_rows]; }
};

// Bin index under stored edges: the number of edges <= x, so values below
// the first edge map to 0 and values above the last to n_bins-1.
inline int bin_value(const std::vector<double>& edges, double x) {
  return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
}

// Equal-frequency edges computed on training data. Edge j (1-based) is the
// value at sorted rank ceil(j*n/B); duplicate edges collapse so indices stay
// in range.
inline std::vector<double> equal_frequency_edges(std::vector<double> values, int n_bins) {
  std::sort(values.begin(), values.end());
  std::vector<double> edges;
  const std::size_t n = values.size();
  for (int j = 1; j < n_bins; ++j) {
    const std::size_t rank = (static_cast<std::size_t>(j) * n + n_bins - 1) / n_bins;
    const double e = values[std::min(rank, n - 1)];
    if (edges.empty() || e > edges.back()) edges.push_back(e);
  }
  return edges;
}

// Accessor for one feature column of a row-major float matrix.
struct FeatureColumnView {
  const float* data = nullptr;
  std::size_t stride = 0;
  std::size_t n_rows = 0;
  double operator()(std::size_t row) const { return data[row * stride]; }
};

inline DiscretizedMatrix discretize(const std::vector<FeatureColumnView>& columns, int n_bins = kDefaultBins) {
  if (columns.empty()) throw ValidationError("discretize: no feature columns");
  const std::size_t n = columns.front().n_rows;
  if (n < static_cast<std::size_t>(n_bins))
    throw ValidationError("discretize: need at least " + std::to_string(n_bins) + " rows, got " +
                          std::to_string(n));
  DiscretizedMatrix d;
  d.n_rows = n;
  d.n_features = columns.size();
  d.n_bins = n_bins;
  d.bins.resize(n * columns.size());
  d.edges.resize(columns.size());
  d.degenerate.assign(columns.size(), 0);

  std::vector<double> scratch(n);
  for (std::size_t f = 0; f < columns.size(); ++f) {
    const auto& col = columns[f];
    for (std::size_t i = 0; i < n; ++i) scratch[i] = col(i);
    d.edges[f] = equal_frequency_edges(scratch, n_bins);
    std::uint8_t* out = &d.bins[f * n];
    if (d.edges[f].empty()) {
      d.degenerate[f] = 1;
      std::fill(out, out + n, 0);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(bin_value(d.edges[f], col(i)));
  }
  return d;
}

// Applies previously computed edges to new data.
inline std::vector<std::uint8_t> discretize_with_edges(const std::vector<double>& edges,
                                                       const FeatureColumnView& col) {
  std::vector<std::uint8_t> out(col.n_rows, 0);
  if (edges.empty()) return out;
  for (std::size_t i = 0; i < col.n_rows; ++i) out[i] = static_cast<std::uint8_t>(bin_value(edges, col(i)));
  return out;
}

// Plug-in mutual information in nats over observed cells. Uses count ratios
// so exact independence yields exactly zero.
inline double mutual_information(const std::uint8_t* x, const std::uint8_t* y, std::size_t n,
                                 int x_card, int y_card) {
  if (n == 0) throw ValidationError("mutual_information: empty columns");
  std::vector<std::uint32_t> joint(static_cast<std::size_t>(x_card) * y_card, 0);
  std::vector<std::uint32_t> cx(x_card, 0), cy(y_card, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++joint[static_cast<std::size_t>(x[i]) * y_card + y[i]];
    ++cx[x[i]];
    ++cy[y[i]];
  }
  const double dn = static_cast<double>(n);
  double mi = 0.0;
  for (int a = 0; a < x_card; ++a) {
    if (cx[a] == 0) continue;
    for (int b = 0; b < y_card; ++b) {
      const std::uint32_t c = joint[static_cast<std::size_t>(a) * y_card + b];
      if (c == 0) continue;
      mi += (c / dn) * std::log((static_cast<double>(c) * dn) / (static_cast<double>(cx[a]) * cy[b]));
    }
  }
  return mi;
}

inline double mutual_information(const std::vector<std::uint8_t>& x, const std::vector<std::uint8_t>& y,
                                 int x_card, int y_card) {
  if (x.size() != y.size()) throw ValidationError("mutual_information: length mismatch");
  return mutual_information(x.data(), y.data(), x.size(), x_card, y_card);
}

struct SelectedFeatureSet {
  std::vector<std::size_t> indices;   // selection order
  std::vector<double> scores;        // greedy score at each step
  std::vector<double> relevance;     // I(X;C) for each selected feature
  std::vector<std::string> names;    // catalog names, parallel to indices
  std::vector<std::vector<double>> edges;  // bin edges, parallel to indices
  std::string task;
  std::string catalog_hash;
  int n_bins = kDefaultBins;
};

// Greedy selection: step 1 takes argmax I(X;C); later steps take
// argmax [ I(X;C) - mean_{s in S} I(X;X_s) ]. Ties break toward the lowest
// feature index; degenerate features are excluded.
inline SelectedFeatureSet greedy_select(const DiscretizedMatrix& d, const std::vector<std::uint8_t>& labels,
                                        int label_card, std::size_t k) {
  if (labels.size() != d.n_rows) throw ValidationError("greedy_select: label count mismatch");
  std::size_t usable = 0;
  for (std::size_t f = 0; f < d.n_features; ++f)
    if (!d.degenerate[f]) ++usable;
  if (k > usable)
    throw ValidationError("greedy_select: requested " + std::to_string(k) + " features but only " +
                          std::to_string(usable) + " non-degenerate features available");

  std::vector<double> relevance(d.n_features, 0.0);
  for (std::size_t f = 0; f < d.n_features; ++f)
    if (!d.degenerate[f])
      relevance[f] = mutual_information(d.column(f), labels.data(), d.n_rows, d.n_bins, label_card);

  SelectedFeatureSet sel;
  sel.n_bins = d.n_bins;
  std::vector<char> taken(d.n_features, 0);
  std::vector<double> redundancy_sum(d.n_features, 0.0);

  for (std::size_t step = 0; step < k; ++step) {
    double best_score = 0.0;
    std::ptrdiff_t best = -1;
    for (std::size_t f = 0; f < d.n_features; ++f) {
      if (taken[f] || d.degenerate[f]) continue;
      const double score =
          step == 0 ? relevance[f] : relevance[f] - redundancy_sum[f] / static_cast<double>(step);
      if (best < 0 || score > best_score) {
        best_score = score;
        best = static_cast<std::ptrdiff_t>(f);
      }
    }
    const std::size_t chosen = static_cast<std::size_t>(best);
    taken[chosen] = 1;
    sel.indices.push_back(chosen);
    sel.scores.push_back(best_score);
    sel.relevance.push_back(relevance[chosen]);
    sel.edges.push_back(d.edges[chosen]);
    for (std::size_t f = 0; f < d.n_features; ++f) {
      if (taken[f] || d.degenerate[f]) continue;
      redundancy_sum[f] += mutual_information(d.column(f), d.column(chosen), d.n_rows, d.n_bins, d.n_bins);
    }
  }
  return sel;
}

inline nlohmann::json selection_to_json(const SelectedFeatureSet& s) {
  nlohmann::json j;
  j["format"] = "coughdet-selection";
  j["task"] = s.task;
  j["catalog_hash"] = s.catalog_hash;
  j["n_bins"] = s.n_bins;
  j["indices"] = s.indices;
  j["scores"] = s.scores;
  j["relevance"] = s.relevance;
  j["names"] = s.names;
  j["edges"] = s.edges;
  return j;
}

inline SelectedFeatureSet selection_from_json(const nlohmann::json& j) {
  SelectedFeatureSet s;
  s.task = j.at("task").get<std::string>();
  s.catalog_hash = j.at("catalog_hash").get<std::string>();
  s.n_bins = j.at("n_bins").get<int>();
  s.indices = j.at("indices").get<std::vector<std::size_t>>();
  s.scores = j.at("scores").get<std::vector<double>>();
  s.relevance = j.at("relevance").get<std::vector<double>>();
  s.names = j.at("names").get<std::vector<std::string>>();
  s.edges = j.at("edges").get<std::vector<std::vector<double>>>();
  return s;
}

inline void write_selection(const std::string& path, const SelectedFeatureSet& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write selection file: " + path);
  out << selection_to_json(s).dump(2) << "\n";
}

inline SelectedFeatureSet load_selection(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open selection file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt selection file: " + path + " (" + e.what() + ")");
  }
  return selection_from_json(j);
}

}  // namespace coughdet
