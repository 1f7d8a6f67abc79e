#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "eegintent/error.hpp"
#include "eegintent/spectral/fft.hpp"

namespace eegintent::spectral {

enum class Window { Hann };

struct WelchConfig {
  std::size_t segment_length = 512;
  std::size_t overlap = 256;
  Window window = Window::Hann;

  std::size_t fft_length() const { return segment_length; }
  double bin_width(double sample_rate_hz) const { return sample_rate_hz / static_cast<double>(fft_length()); }

  void validate() const {
    if (segment_length < 2 || !std::has_single_bit(segment_length))
      throw Error(ErrorCode::InvalidConfig, "segment_length must be a power of two >= 2");
    if (overlap >= segment_length) throw Error(ErrorCode::InvalidConfig, "overlap must be < segment_length");
  }

  bool operator==(const WelchConfig&) const = default;
};

/// Periodic Hann window of length n.
inline std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

struct Psd {
  std::vector<double> density;  // one-sided, uV^2/Hz, length fft_length/2 + 1
  std::vector<double> freqs_hz;
};

/// Frequencies of the one-sided bins for a given FFT length.
inline std::vector<double> bin_frequencies(std::size_t fft_length, double sample_rate_hz) {
  std::vector<double> f(fft_length / 2 + 1);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = static_cast<double>(k) * sample_rate_hz / fft_length;
  return f;
}

/// Welch estimate: mean of Hann-windowed, mean-removed segment periodograms,
/// density scaling 1/(fs * sum w^2), interior bins doubled.
template <typename T>
Psd welch_psd(std::span<const T> signal, const WelchConfig& config, double sample_rate_hz) {
  config.validate();
  const std::size_t seg = config.segment_length;
  if (signal.size() < seg)
    throw Error(ErrorCode::SignalTooShort,
                std::to_string(signal.size()) + " samples < segment length " + std::to_string(seg));
  const std::size_t step = seg - config.overlap;
  const std::size_t n_segments = (signal.size() - seg) / step + 1;

  const auto window = hann_window(seg);
  double window_energy = 0.0;
  for (double w : window) window_energy += w * w;

  const std::size_t n_bins = seg / 2 + 1;
  Psd out{std::vector<double>(n_bins, 0.0), bin_frequencies(seg, sample_rate_hz)};
  std::vector<std::complex<double>> buffer(seg);
  for (std::size_t s = 0; s < n_segments; ++s) {
    const auto segment = signal.subspan(s * step, seg);
    double mean = 0.0;
    for (T v : segment) mean += static_cast<double>(v);
    mean /= static_cast<double>(seg);
    for (std::size_t i = 0; i < seg; ++i) buffer[i] = {(static_cast<double>(segment[i]) - mean) * window[i], 0.0};
    detail::fft_in_place<double>(buffer, false);
    for (std::size_t k = 0; k < n_bins; ++k) out.density[k] += std::norm(buffer[k]);
  }

  const double scale = 1.0 / (sample_rate_hz * window_energy * static_cast<double>(n_segments));
  for (std::size_t k = 0; k < n_bins; ++k) {
    out.density[k] *= scale;
    if (k != 0 && k != seg / 2) out.density[k] *= 2.0;
  }
  return out;
}

template <typename T>
Psd welch_psd(const std::vector<T>& signal, const WelchConfig& config, double sample_rate_hz) {
  return welch_psd(std::span<const T>(signal), config, sample_rate_hz);
}

}  // namespace eegintent::spectral
