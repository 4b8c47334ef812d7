#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "coughdet/selection.hpp"

using namespace coughdet;

namespace {

std::vector<FeatureColumnView> column_views(const std::vector<float>& data, std::size_t n_rows,
                                            std::size_t n_cols) {
  std::vector<FeatureColumnView> cols(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) cols[c] = {data.data() + c, n_cols, n_rows};
  return cols;
}

}  // namespace

TEST_CASE("equal-frequency binning splits 3200 ordered frames into 32 bins of 100") {
  const std::size_t n = 3200;
  std::vector<float> data(n);
  for (std::size_t i = 0; i < n; ++i) data[i] = static_cast<float>(i);
  const auto d = discretize(column_views(data, n, 1), 32);
  REQUIRE(d.degenerate[0] == 0);
  std::array<int, 32> counts{};
  for (std::size_t i = 0; i < n; ++i) ++counts[d.column(0)[i]];
  for (int c : counts) REQUIRE(c == 100);
}

TEST_CASE("constant features are flagged degenerate with all-zero bins") {
  std::vector<float> data(100, 4.5f);
  const auto d = discretize(column_views(data, 100, 1), 32);
  REQUIRE(d.degenerate[0] == 1);
  for (std::size_t i = 0; i < 100; ++i) REQUIRE(d.column(0)[i] == 0);
}

TEST_CASE("stored edges clamp out-of-range values to the outer bins") {
  std::vector<float> data(320);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<float>(i);
  const auto d = discretize(column_views(data, data.size(), 1), 32);

  std::vector<float> fresh = {-1000.0f, 1e6f, 160.0f};
  const auto bins = discretize_with_edges(d.edges[0], {fresh.data(), 1, fresh.size()});
  REQUIRE(bins[0] == 0);
  REQUIRE(bins[1] == 31);
  REQUIRE(bins[2] > 0);
  REQUIRE(bins[2] < 31);
}

TEST_CASE("mutual information of exactly independent columns is exactly zero") {
  const std::size_t n = 6000;
  std::vector<std::uint8_t> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<std::uint8_t>(i % 2);
    y[i] = static_cast<std::uint8_t>(i % 3);
  }
  REQUIRE(mutual_information(x, y, 2, 3) == 0.0);
}

TEST_CASE("I(x;x) equals the plug-in entropy") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> u(0, 4);
  const std::size_t n = 500;
  std::vector<std::uint8_t> x(n);
  for (auto& v : x) v = static_cast<std::uint8_t>(u(rng));

  std::map<int, int> counts;
  for (auto v : x) ++counts[v];
  double h = 0.0;
  for (const auto& [value, c] : counts)
    h += (static_cast<double>(c) / n) * std::log(static_cast<double>(n) / c);

  REQUIRE(mutual_information(x, x, 5, 5) == Catch::Approx(h).margin(1e-12));
}

TEST_CASE("mutual information is symmetric") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> u(0, 7);
  const std::size_t n = 1000;
  std::vector<std::uint8_t> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<std::uint8_t>(u(rng));
    y[i] = static_cast<std::uint8_t>((u(rng) + x[i]) % 8);
  }
  REQUIRE(std::abs(mutual_information(x, y, 8, 8) - mutual_information(y, x, 8, 8)) <= 1e-12);
}

// Independent re-implementation of the selection criterion operating on raw
// integer columns: plug-in MI from joint probabilities, greedy
// relevance-minus-mean-redundancy, ties to the lowest index.
namespace {

double oracle_mi(const std::vector<int>& x, const std::vector<int>& y) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> px, py;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    joint[{x[i], y[i]}] += 1.0 / n;
    px[x[i]] += 1.0 / n;
    py[y[i]] += 1.0 / n;
  }
  double mi = 0.0;
  for (const auto& [cell, p] : joint) mi += p * std::log(p / (px[cell.first] * py[cell.second]));
  return mi;
}

std::vector<std::size_t> oracle_greedy(const std::vector<std::vector<int>>& features,
                                       const std::vector<int>& labels, std::size_t k) {
  std::vector<std::size_t> selected;
  std::vector<char> taken(features.size(), 0);
  while (selected.size() < k) {
    double best_score = 0.0;
    std::ptrdiff_t best = -1;
    for (std::size_t f = 0; f < features.size(); ++f) {
      if (taken[f]) continue;
      double score = oracle_mi(features[f], labels);
      if (!selected.empty()) {
        double redundancy = 0.0;
        for (std::size_t s : selected) redundancy += oracle_mi(features[f], features[s]);
        score -= redundancy / static_cast<double>(selected.size());
      }
      if (best < 0 || score > best_score) {
        best_score = score;
        best = static_cast<std::ptrdiff_t>(f);
      }
    }
    taken[best] = 1;
    selected.push_back(static_cast<std::size_t>(best));
  }
  return selected;
}

// Toy data: 6 small-integer features over 200 frames with a binary label.
// Every feature value occurs often enough that equal-frequency binning keeps
// distinct values in distinct bins, so the oracle may work on the raw
// integers.
struct ToyData {
  std::vector<std::vector<int>> features;
  std::vector<int> labels;
  std::vector<float> dense;  // row-major for the library path
  std::vector<std::uint8_t> label_bytes;
};

ToyData make_toy(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> value(0, 3);
  const std::size_t n = 200, f = 6;
  ToyData toy;
  toy.labels.resize(n);
  toy.features.assign(f, std::vector<int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const int c = coin(rng);
    toy.labels[i] = c;
    toy.features[0][i] = c;
    toy.features[1][i] = value(rng);
    toy.features[2][i] = (coin(rng) == 0 ? c : value(rng) % 2) * 2 + coin(rng);
    toy.features[3][i] = value(rng);
    toy.features[4][i] = c ^ (value(rng) == 0);
    toy.features[5][i] = (toy.features[1][i] + value(rng)) % 4;
  }
  toy.dense.resize(n * f);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < f; ++j) toy.dense[i * f + j] = static_cast<float>(toy.features[j][i]);
  toy.label_bytes.resize(n);
  for (std::size_t i = 0; i < n; ++i) toy.label_bytes[i] = static_cast<std::uint8_t>(toy.labels[i]);
  // oracle precondition: every value block is large enough to straddle a bin
  // edge
  for (const auto& col : toy.features) {
    std::map<int, int> counts;
    for (int v : col) ++counts[v];
    for (const auto& [value_, count] : counts) REQUIRE(count >= 8);
  }
  return toy;
}

}  // namespace

TEST_CASE("greedy selection matches the independent oracle for k = 1, 2, 3") {
  const auto toy = make_toy(2024);
  const auto d = discretize(column_views(toy.dense, 200, 6), 32);
  for (std::size_t k : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
    const auto sel = greedy_select(d, toy.label_bytes, 2, k);
    const auto expected = oracle_greedy(toy.features, toy.labels, k);
    REQUIRE(sel.indices == expected);
  }
}

TEST_CASE("a duplicated top feature is not selected at step 2") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> pct(0, 99);
  const std::size_t n = 400;
  std::vector<std::uint8_t> labels(n);
  std::vector<float> dense(n * 3);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = coin(rng);
    labels[i] = static_cast<std::uint8_t>(c);
    const int f0 = pct(rng) < 10 ? 1 - c : c;  // strong feature
    const int f2 = pct(rng) < 30 ? 1 - c : c;  // weaker, fairly independent errors
    dense[i * 3 + 0] = static_cast<float>(f0);
    dense[i * 3 + 1] = static_cast<float>(f0);  // exact duplicate
    dense[i * 3 + 2] = static_cast<float>(f2);
  }
  const auto d = discretize(column_views(dense, n, 3), 32);
  const auto sel = greedy_select(d, labels, 2, 2);
  REQUIRE(sel.indices[0] == 0);  // tie against the duplicate breaks to the lowest index
  REQUIRE(sel.indices[1] == 2);
  // the duplicate's step-2 score is I(X;C) - H(X) <= 0
  const double h = mutual_information(d.column(1), d.column(1), d.n_rows, 32, 32);
  const double rel = mutual_information(d.column(1), labels.data(), d.n_rows, 32, 2);
  REQUIRE(rel - h <= 1e-12);
}

TEST_CASE("selection matches exhaustive relevance search at k = 1") {
  const auto toy = make_toy(77);
  const auto d = discretize(column_views(toy.dense, 200, 6), 32);
  const auto sel = greedy_select(d, toy.label_bytes, 2, 1);
  double best = -1.0;
  std::size_t best_f = 0;
  for (std::size_t f = 0; f < 6; ++f) {
    const double mi = oracle_mi(toy.features[f], toy.labels);
    if (mi > best) {
      best = mi;
      best_f = f;
    }
  }
  REQUIRE(sel.indices[0] == best_f);
  REQUIRE(sel.relevance[0] == Catch::Approx(best).margin(1e-12));
}

TEST_CASE("strictly increasing transforms change neither bins nor selection") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> coin(0, 1);
  const std::size_t n = 300, f = 4;
  std::vector<float> dense(n * f), transformed(n * f);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<std::uint8_t>(coin(rng));
    for (std::size_t j = 0; j < f; ++j) {
      const double v = u(rng) + (j == 0 ? labels[i] : 0.0);
      dense[i * f + j] = static_cast<float>(v);
      transformed[i * f + j] = static_cast<float>(std::exp(v));  // strictly increasing
    }
  }
  const auto da = discretize(column_views(dense, n, f), 32);
  const auto db = discretize(column_views(transformed, n, f), 32);
  REQUIRE(da.bins == db.bins);
  for (std::size_t j = 0; j < f; ++j)
    REQUIRE(mutual_information(da.column(j), labels.data(), n, 32, 2) ==
            mutual_information(db.column(j), labels.data(), n, 32, 2));
  const auto sa = greedy_select(da, labels, 2, 3);
  const auto sb = greedy_select(db, labels, 2, 3);
  REQUIRE(sa.indices == sb.indices);
}

TEST_CASE("permuting frames leaves MI unchanged") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> u(0, 15);
  const std::size_t n = 777;
  std::vector<std::uint8_t> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<std::uint8_t>(u(rng));
    y[i] = static_cast<std::uint8_t>(u(rng) % 3);
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::uint8_t> xp(n), yp(n);
  for (std::size_t i = 0; i < n; ++i) {
    xp[i] = x[perm[i]];
    yp[i] = y[perm[i]];
  }
  REQUIRE(mutual_information(x, y, 16, 3) == Catch::Approx(mutual_information(xp, yp, 16, 3)).margin(1e-15));
}

TEST_CASE("requesting more features than available fails") {
  std::vector<float> dense(100 * 2);
  for (std::size_t i = 0; i < 100; ++i) {
    dense[i * 2] = static_cast<float>(i % 7);
    dense[i * 2 + 1] = 1.0f;  // degenerate
  }
  std::vector<std::uint8_t> labels(100, 0);
  for (std::size_t i = 0; i < 100; i += 2) labels[i] = 1;
  const auto d = discretize(column_views(dense, 100, 2), 32);
  REQUIRE_THROWS_AS(greedy_select(d, labels, 2, 2), ValidationError);
  REQUIRE_NOTHROW(greedy_select(d, labels, 2, 1));
}

TEST_CASE("selection JSON round trip") {
  const auto toy = make_toy(5);
  const auto d = discretize(column_views(toy.dense, 200, 6), 32);
  auto sel = greedy_select(d, toy.label_bytes, 2, 3);
  sel.task = "activity";
  sel.catalog_hash = "deadbeef";
  for (std::size_t i : sel.indices) sel.names.push_back("col" + std::to_string(i));
  const auto j = selection_to_json(sel);
  const auto back = selection_from_json(j);
  REQUIRE(back.indices == sel.indices);
  REQUIRE(back.scores == sel.scores);
  REQUIRE(back.names == sel.names);
  REQUIRE(back.edges == sel.edges);
  REQUIRE(back.task == sel.task);
}
