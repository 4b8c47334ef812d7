// Temporal derivatives of per-frame feature sequences: 5-point
// linear-regression slope with replicated-endpoint padding.
#pragma once

#include <vector>

#include "coughdet/common.hpp"

namespace coughdet {

// delta[t] = sum_{j=-2..2} j * v[t+j] / 10, indices clamped to the sequence.
inline std::vector<double> delta_sequence(const std::vector<double>& v) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
  std::vector<double> out(v.size(), 0.0);
  if (n == 0) return out;
  auto at = [&](std::ptrdiff_t i) {
    if (i < 0) i = 0;
    if (i >= n) i = n - 1;
    return v[static_cast<std::size_t>(i)];
  };
  for (std::ptrdiff_t t = 0; t < n; ++t)
    out[static_cast<std::size_t>(t)] =
        (-2.0 * at(t - 2) - at(t - 1) + at(t + 1) + 2.0 * at(t + 2)) / 10.0;
  return out;
}

}  // namespace coughdet
