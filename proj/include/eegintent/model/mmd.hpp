#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "eegintent/model/network.hpp"

namespace eegintent::model {

/// Squared Euclidean distance between two columns, computed from differences.
template <typename S>
S squared_distance(const Eigen::Ref<const Vec<S>>& u, const Eigen::Ref<const Vec<S>>& v) {
  return (u - v).squaredNorm();
}

/// Biased (V-statistic) MMD^2 between column sets X and Y with RBF kernel
/// k(u,v) = exp(-|u-v|^2 / (2 sigma^2)).
template <typename S>
S mmd_rbf(const Mat<S>& x, const Mat<S>& y, S sigma) {
  if (x.cols() == 0 || y.cols() == 0) throw Error(ErrorCode::EmptyGroup, "both embedding sets must be non-empty");
  if (x.rows() != y.rows()) throw Error(ErrorCode::ShapeMismatch, "embedding dimensions differ");
  if (!(sigma > 0)) throw Error(ErrorCode::InvalidConfig, "bandwidth must be positive");
  const S two_s2 = S(2) * sigma * sigma;
  auto mean_kernel = [&](const Mat<S>& a, const Mat<S>& b) {
    S total = 0;
    for (Eigen::Index i = 0; i < a.cols(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) total += std::exp(-squared_distance<S>(a.col(i), b.col(j)) / two_s2);
    return total / static_cast<S>(a.cols() * b.cols());
  };
  return mean_kernel(x, x) + mean_kernel(y, y) - S(2) * mean_kernel(x, y);
}

/// sigma with sigma^2 = median(pairwise squared distances) / 2. Even pair counts use the
/// mean of the two central values.
template <typename S>
S median_heuristic(const Mat<S>& z) {
  if (z.cols() < 2) throw Error(ErrorCode::DegenerateEmbeddings, "need at least two embeddings");
  std::vector<S> d2;
  d2.reserve(static_cast<std::size_t>(z.cols() * (z.cols() - 1) / 2));
  for (Eigen::Index i = 0; i < z.cols(); ++i)
    for (Eigen::Index j = i + 1; j < z.cols(); ++j) d2.push_back(squared_distance<S>(z.col(i), z.col(j)));
  std::sort(d2.begin(), d2.end());
  const std::size_t n = d2.size();
  const S median = n % 2 == 1 ? d2[n / 2] : (d2[n / 2 - 1] + d2[n / 2]) / S(2);
  if (!(median > 0)) throw Error(ErrorCode::DegenerateEmbeddings, "median pairwise distance is zero");
  return std::sqrt(median / S(2));
}

/// MMD^2 and its gradient for a pooled batch whose columns are tagged by group.
///
/// With w_a = 1/n for group-0 columns and -1/m for group-1 columns, MMD^2 = w^T K w and
/// d/dz_a = -(2 / sigma^2) w_a sum_b w_b K_ab (z_a - z_b).
template <typename S>
S mmd_rbf_with_grad(const Mat<S>& z, const std::vector<int>& group, S sigma, Mat<S>& grad) {
  const Eigen::Index b = z.cols();
  std::size_t n0 = 0, n1 = 0;
  for (int g : group) (g == 0 ? n0 : n1)++;
  if (n0 == 0 || n1 == 0) throw Error(ErrorCode::EmptyGroup, "both domains must be present");
  Vec<S> w(b);
  for (Eigen::Index a = 0; a < b; ++a) w[a] = group[a] == 0 ? S(1) / S(n0) : S(-1) / S(n1);
  const S inv = S(1) / (S(2) * sigma * sigma);
  Mat<S> k(b, b);
  for (Eigen::Index i = 0; i < b; ++i) {
    k(i, i) = S(1);
    for (Eigen::Index j = i + 1; j < b; ++j) k(i, j) = k(j, i) = std::exp(-squared_distance<S>(z.col(i), z.col(j)) * inv);
  }
  const Vec<S> kw = k * w;
  const Vec<S> coeff = w.cwiseProduct(kw);
  grad = (z * coeff.asDiagonal() - z * w.asDiagonal() * k * w.asDiagonal()) * (S(-2) / (sigma * sigma));
  return w.dot(kw);
}

}  // namespace eegintent::model
