#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eegintent/core/dataset.hpp"
#include "eegintent/util/rng.hpp"

namespace eegintent {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified split over (class, domain) cells, expressed as positions into the label arrays.
/// Per cell: n_test = round(size * test_fraction) clamped to [1, size - 1]. Both index
/// lists come back sorted ascending.
inline SplitIndices stratified_split_indices(std::span<const int> class_labels, std::span<const Domain> domains,
                                             double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw Error(ErrorCode::InvalidConfig, "test_fraction must lie in (0,1)");
  if (class_labels.size() != domains.size()) throw Error(ErrorCode::ShapeMismatch, "label arrays differ in length");

  std::array<std::vector<std::size_t>, kNumClasses * kNumDomains> cells;
  for (std::size_t i = 0; i < class_labels.size(); ++i) {
    const int c = class_labels[i];
    if (c < 0 || c >= kNumClasses) throw Error(ErrorCode::InvalidConfig, "class label out of range");
    cells[c * kNumDomains + static_cast<int>(domains[i])].push_back(i);
  }

  SplitIndices out;
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    auto& members = cells[cell];
    const int c = static_cast<int>(cell) / kNumDomains;
    const auto d = static_cast<Domain>(cell % kNumDomains);
    if (members.size() < 2)
      throw Error(ErrorCode::CellTooSmall,
                  "class " + std::to_string(c) + ", domain " + std::string(to_string(d)) + " has " +
                      std::to_string(members.size()) + " trial(s)");
    // Fisher-Yates with an explicit draw so the permutation does not depend on the
    // standard library's shuffle implementation.
    Rng rng(derive_seed(seed, cell));
    for (std::size_t i = members.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
      std::swap(members[i], members[j]);
    }
    const auto size = static_cast<long long>(members.size());
    const long long n_test = std::clamp<long long>(std::llround(size * test_fraction), 1, size - 1);
    out.test.insert(out.test.end(), members.begin(), members.begin() + n_test);
    out.train.insert(out.train.end(), members.begin() + n_test, members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

/// Splits a dataset into (train, test). Deterministic in (dataset, fraction, seed).
inline std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  std::vector<int> classes;
  std::vector<Domain> domains;
  for (const auto& t : ds.trials) {
    classes.push_back(t.class_label);
    domains.push_back(t.domain);
  }
  const auto idx = stratified_split_indices(classes, domains, test_fraction, seed);
  Dataset train{ds.spec, ds.channel_names, {}};
  Dataset test{ds.spec, ds.channel_names, {}};
  for (auto i : idx.train) train.trials.push_back(ds.trials[i]);
  for (auto i : idx.test) test.trials.push_back(ds.trials[i]);
  return {std::move(train), std::move(test)};
}

}  // namespace eegintent
