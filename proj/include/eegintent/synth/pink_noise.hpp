#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include "eegintent/spectral/fft.hpp"
#include "eegintent/util/rng.hpp"

namespace eegintent::synth {

/// Zero-mean 1/f noise with unit expected variance.
///
/// A Hermitian spectrum with E|X_k|^2 = 1/k is drawn on the next power-of-two grid,
/// inverted, truncated to `n_samples` and mean-removed. The scale uses the analytic
/// variance of the untruncated sequence, so individual realizations are not renormalized.
inline std::vector<double> pink_noise(std::size_t n_samples, Rng& rng) {
  const std::size_t n = std::bit_ceil(std::max<std::size_t>(n_samples, 2));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::complex<double>> spectrum(n);
  double variance_sum = 0.0;
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double sd = std::sqrt(0.5 / static_cast<double>(k));
    const double re = normal(rng) * sd;
    const double im = normal(rng) * sd;
    spectrum[k] = {re, im};
    spectrum[n - k] = {re, -im};
    variance_sum += 2.0 / static_cast<double>(k);
  }
  const double nyquist_var = 1.0 / static_cast<double>(n / 2);
  spectrum[n / 2] = {normal(rng) * std::sqrt(nyquist_var), 0.0};
  variance_sum += nyquist_var;

  const auto series = spectral::ifft(spectrum);
  // ifft carries 1/n, so Var(x[t]) = variance_sum / n^2.
  const double scale = static_cast<double>(n) / std::sqrt(variance_sum);
  std::vector<double> out(n_samples);
  double mean = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    out[i] = series[i].real() * scale;
    mean += out[i];
  }
  mean /= static_cast<double>(n_samples);
  for (auto& v : out) v -= mean;
  return out;
}

}  // namespace eegintent::synth
