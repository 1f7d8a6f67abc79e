#pragma once

#include <cmath>
#include <span>

#include "eegintent/error.hpp"
#include "eegintent/stats/student_t.hpp"

namespace eegintent::stats {

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
};

namespace detail {

struct Moments {
  double mean;
  double var;  // unbiased
};

inline Moments moments(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, ss / static_cast<double>(x.size() - 1)};
}

}  // namespace detail

/// Welch's unequal-variance t-test; t > 0 means mean(a) > mean(b).
inline TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw Error(ErrorCode::InsufficientTrials, "each group needs >= 2 samples");
  const auto ma = detail::moments(a);
  const auto mb = detail::moments(b);
  const double sa = ma.var / static_cast<double>(a.size());
  const double sb = mb.var / static_cast<double>(b.size());
  const double se2 = sa + sb;
  if (!(se2 > 0)) throw Error(ErrorCode::DegenerateSample, "zero variance in both groups");
  const double t = (ma.mean - mb.mean) / std::sqrt(se2);
  const double df = se2 * se2 / (sa * sa / static_cast<double>(a.size() - 1) + sb * sb / static_cast<double>(b.size() - 1));
  return {t, df, student_t_two_sided_p(t, df)};
}

}  // namespace eegintent::stats
