#pragma once

#include <span>
#include <string>
#include <vector>

#include "eegintent/error.hpp"

namespace eegintent::spectral {

struct Band {
  std::string name;
  double low_hz;   // inclusive
  double high_hz;  // exclusive

  bool contains(double f) const { return f >= low_hz && f < high_hz; }
  bool operator==(const Band&) const = default;
};

using BandTable = std::vector<Band>;

inline BandTable default_bands() {
  return {{"delta", 1.0, 4.0}, {"theta", 4.0, 8.0}, {"alpha", 8.0, 13.0}, {"beta", 13.0, 30.0}, {"gamma", 30.0, 50.0}};
}

inline void validate_bands(const BandTable& bands) {
  if (bands.empty()) throw Error(ErrorCode::InvalidConfig, "band table is empty");
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    if (!(b.low_hz < b.high_hz)) throw Error(ErrorCode::InvalidConfig, "band " + b.name + " has low >= high");
    if (i > 0 && b.low_hz < bands[i - 1].high_hz)
      throw Error(ErrorCode::InvalidConfig, "bands must be disjoint and ordered: " + b.name);
  }
}

inline const Band& find_band(const BandTable& bands, const std::string& name) {
  for (const auto& b : bands)
    if (b.name == name) return b;
  throw Error(ErrorCode::InvalidConfig, "no band named " + name);
}

/// Integrated power (uV^2): sum of psd[k] * df over bins with low <= f < high.
inline double band_power(std::span<const double> psd, std::span<const double> bin_freqs, const Band& band) {
  if (psd.size() != bin_freqs.size()) throw Error(ErrorCode::ShapeMismatch, "psd and bin_freqs differ in length");
  if (bin_freqs.size() < 2) throw Error(ErrorCode::EmptyBand, band.name);
  const double df = bin_freqs[1] - bin_freqs[0];
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < psd.size(); ++k) {
    if (band.contains(bin_freqs[k])) {
      total += psd[k] * df;
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::EmptyBand, band.name);
  return total;
}

}  // namespace eegintent::spectral
