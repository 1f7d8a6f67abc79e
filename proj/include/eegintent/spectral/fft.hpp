#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "eegintent/error.hpp"

namespace eegintent::spectral {

namespace detail {

template <typename T>
void fft_in_place(std::span<std::complex<T>> a, bool inverse) {
  const std::size_t n = a.size();
  if (n < 2 || !std::has_single_bit(n))
    throw Error(ErrorCode::NonPowerOfTwoLength, "length " + std::to_string(n));

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  // Twiddles computed directly from cos/sin per index; recurrences drift past 1e-9 at N=1024.
  // Cached per thread since Welch and the noise generator call this thousands of times per trial.
  thread_local std::vector<std::complex<T>> twiddle;
  thread_local std::size_t cached_n = 0;
  thread_local bool cached_inverse = false;
  if (cached_n != n || cached_inverse != inverse) {
    const T sign = inverse ? T(1) : T(-1);
    twiddle.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const T angle = sign * T(2) * std::numbers::pi_v<T> * static_cast<T>(k) / static_cast<T>(n);
      twiddle[k] = {std::cos(angle), std::sin(angle)};
    }
    cached_n = n;
    cached_inverse = inverse;
  }

  // Plain product: std::complex operator* takes the slow Annex G path when FMA contraction is off.
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const auto w = twiddle[k * stride];
        const auto b = a[start + k + half];
        const std::complex<T> v{b.real() * w.real() - b.imag() * w.imag(), b.real() * w.imag() + b.imag() * w.real()};
        const auto u = a[start + k];
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

}  // namespace detail

/// Forward DFT, X[k] = sum_n x[n] e^{-i 2 pi k n / N}, unnormalized. N must be a power of two >= 2.
template <typename T>
std::vector<std::complex<T>> fft(std::span<const std::complex<T>> input) {
  std::vector<std::complex<T>> out(input.begin(), input.end());
  detail::fft_in_place<T>(out, false);
  return out;
}

/// Inverse DFT including the 1/N factor, so ifft(fft(x)) == x.
template <typename T>
std::vector<std::complex<T>> ifft(std::span<const std::complex<T>> input) {
  std::vector<std::complex<T>> out(input.begin(), input.end());
  detail::fft_in_place<T>(out, true);
  const T scale = T(1) / static_cast<T>(out.size());
  for (auto& v : out) v *= scale;
  return out;
}

template <typename T>
std::vector<std::complex<T>> fft(const std::vector<std::complex<T>>& input) {
  return fft(std::span<const std::complex<T>>(input));
}

template <typename T>
std::vector<std::complex<T>> ifft(const std::vector<std::complex<T>>& input) {
  return ifft(std::span<const std::complex<T>>(input));
}

}  // namespace eegintent::spectral
