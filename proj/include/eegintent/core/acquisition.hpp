#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "eegintent/error.hpp"

namespace eegintent {

/// Recording parameters shared by every trial of a dataset.
struct AcquisitionSpec {
  double sample_rate_hz = 500.0;
  std::size_t n_channels = 64;
  double trial_seconds = 3.0;
  double band_low_hz = 1.0;
  double band_high_hz = 50.0;

  std::size_t n_samples() const {
    return static_cast<std::size_t>(std::llround(sample_rate_hz * trial_seconds));
  }

  void validate() const {
    if (!(sample_rate_hz > 0) || n_channels == 0 || !(trial_seconds > 0))
      throw Error(ErrorCode::InvalidConfig, "sample rate, channel count and trial length must be positive");
    if (!(band_low_hz < band_high_hz) || band_high_hz > sample_rate_hz / 2)
      throw Error(ErrorCode::InvalidConfig, "band edges must satisfy low < high <= fs/2");
    if (n_samples() < 2) throw Error(ErrorCode::InvalidConfig, "trial shorter than two samples");
  }

  bool operator==(const AcquisitionSpec&) const = default;
};

}  // namespace eegintent
