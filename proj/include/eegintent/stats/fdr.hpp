#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "eegintent/error.hpp"

namespace eegintent::stats {

struct FdrResult {
  std::vector<double> adjusted;
  std::vector<bool> reject;
};

/// Benjamini-Hochberg step-up. adjusted[i] = min_{j >= rank(i)} m p_(j) / j, capped at 1;
/// reject iff adjusted <= alpha. Ties are ordered by original index.
inline FdrResult bh_fdr(std::span<const double> p, double alpha) {
  const std::size_t m = p.size();
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidConfig, "p-values must lie in [0,1]");
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return p[i] < p[j]; });

  FdrResult out{std::vector<double>(m), std::vector<bool>(m)};
  double running = 1.0;
  for (std::size_t r = m; r-- > 0;) {
    const std::size_t i = order[r];
    running = std::min(running, static_cast<double>(m) * p[i] / static_cast<double>(r + 1));
    out.adjusted[i] = std::min(running, 1.0);
  }
  for (std::size_t i = 0; i < m; ++i) out.reject[i] = out.adjusted[i] <= alpha;
  return out;
}

}  // namespace eegintent::stats
