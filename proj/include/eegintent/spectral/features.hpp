#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eegintent/core/dataset.hpp"
#include "eegintent/spectral/bands.hpp"
#include "eegintent/spectral/welch.hpp"

namespace eegintent::spectral {

inline constexpr double kPsdFloor = 1e-12;

/// Per-trial log10 PSD, row-major [channel][bin], restricted to [band_low, band_high] Hz.
/// Values are rounded to float32 so in-memory features and feature files agree bit for bit.
struct SpectralFeatures {
  std::uint64_t trial_id = 0;
  std::size_t n_channels = 0;
  std::size_t n_bins = 0;
  std::vector<float> values;
  std::vector<double> bin_freqs_hz;

  float at(std::size_t ch, std::size_t bin) const { return values[ch * n_bins + bin]; }
};

/// Bin indices k of the one-sided spectrum whose centre lies in [low, high].
inline std::vector<std::size_t> in_band_bins(const WelchConfig& config, const AcquisitionSpec& spec) {
  const auto freqs = bin_frequencies(config.fft_length(), spec.sample_rate_hz);
  std::vector<std::size_t> bins;
  for (std::size_t k = 0; k < freqs.size(); ++k)
    if (freqs[k] >= spec.band_low_hz && freqs[k] <= spec.band_high_hz) bins.push_back(k);
  return bins;
}

inline SpectralFeatures extract_features(const TrialRecord& trial, const WelchConfig& config,
                                         const AcquisitionSpec& spec) {
  validate_trial(trial, spec);
  const auto bins = in_band_bins(config, spec);
  SpectralFeatures out;
  out.trial_id = trial.trial_id;
  out.n_channels = trial.n_channels;
  out.n_bins = bins.size();
  out.values.resize(out.n_channels * out.n_bins);
  const auto freqs = bin_frequencies(config.fft_length(), spec.sample_rate_hz);
  for (auto k : bins) out.bin_freqs_hz.push_back(freqs[k]);

  for (std::size_t ch = 0; ch < trial.n_channels; ++ch) {
    const auto psd = welch_psd(trial.channel(ch), config, spec.sample_rate_hz);
    for (std::size_t b = 0; b < bins.size(); ++b)
      out.values[ch * out.n_bins + b] = static_cast<float>(std::log10(std::max(psd.density[bins[b]], kPsdFloor)));
  }
  return out;
}

struct TrialMeta {
  std::uint64_t trial_id = 0;
  int class_label = 0;
  Domain domain = Domain::Correct;
  bool operator==(const TrialMeta&) const = default;
};

/// Feature matrices for a whole dataset, flattened [trial][channel][bin].
struct FeatureSet {
  std::vector<std::string> channel_names;
  std::vector<double> bin_freqs_hz;
  double bin_width_hz = 0.0;
  std::vector<TrialMeta> trials;
  std::vector<float> values;

  std::size_t n_channels() const { return channel_names.size(); }
  std::size_t n_bins() const { return bin_freqs_hz.size(); }
  std::size_t row_size() const { return n_channels() * n_bins(); }
  std::size_t size() const { return trials.size(); }

  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(values).subspan(i * row_size(), row_size());
  }

  FeatureSet subset(std::span<const std::size_t> indices) const {
    FeatureSet out{channel_names, bin_freqs_hz, bin_width_hz, {}, {}};
    for (auto i : indices) {
      out.trials.push_back(trials[i]);
      const auto r = row(i);
      out.values.insert(out.values.end(), r.begin(), r.end());
    }
    return out;
  }

  bool operator==(const FeatureSet&) const = default;
};

inline FeatureSet extract_feature_set(const Dataset& ds, const WelchConfig& config) {
  FeatureSet out;
  out.channel_names = ds.channel_names;
  out.bin_width_hz = config.bin_width(ds.spec.sample_rate_hz);
  const auto freqs = bin_frequencies(config.fft_length(), ds.spec.sample_rate_hz);
  for (auto k : in_band_bins(config, ds.spec)) out.bin_freqs_hz.push_back(freqs[k]);
  out.values.reserve(ds.trials.size() * out.row_size());
  for (const auto& t : ds.trials) {
    auto f = extract_features(t, config, ds.spec);
    out.trials.push_back({t.trial_id, t.class_label, t.domain});
    out.values.insert(out.values.end(), f.values.begin(), f.values.end());
  }
  return out;
}

/// Linear band power (uV^2) for one channel of one trial, recovered from the log PSD row.
inline double feature_band_power(const FeatureSet& fs, std::size_t trial, std::size_t channel, const Band& band) {
  const auto r = fs.row(trial).subspan(channel * fs.n_bins(), fs.n_bins());
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < fs.n_bins(); ++k) {
    if (band.contains(fs.bin_freqs_hz[k])) {
      total += std::pow(10.0, static_cast<double>(r[k])) * fs.bin_width_hz;
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::EmptyBand, band.name);
  return total;
}

}  // namespace eegintent::spectral
