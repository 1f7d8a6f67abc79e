#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "eegintent/core/dataset.hpp"
#include "eegintent/core/montage.hpp"
#include "eegintent/spectral/bands.hpp"
#include "eegintent/synth/pink_noise.hpp"
#include "eegintent/util/rng.hpp"

namespace eegintent::synth {

/// Generator parameters. Amplitudes are microvolts; gains multiply component amplitude
/// (not power) on the named region when the trial is misarticulated.
struct SynthConfig {
  AcquisitionSpec acquisition{};
  int n_trials_per_class = 50;
  double misarticulation_rate = 0.3;
  double pink_noise_scale = 1.0;

  std::array<std::vector<double>, kNumClasses> class_signature_freqs_hz{{
      {5.9, 16.0},
      {6.8, 19.5},
      {5.9, 23.0},
      {6.8, 26.5},
  }};
  double class_signature_amp = 0.1;

  // Band-limited background components: three sinusoids per band.
  std::array<double, 3> delta_freqs_hz{1.6, 2.2, 2.9};
  std::array<double, 3> alpha_freqs_hz{9.5, 10.5, 11.5};
  std::array<double, 3> gamma_freqs_hz{34.0, 40.0, 46.0};
  double delta_amp = 0.3;
  double alpha_amp = 0.2;
  double gamma_amp = 0.2;

  double delta_gain_mis = 1.8;  // FrontalCentral
  double alpha_gain_mis = 1.6;  // FrontalCentral
  double gamma_gain_mis = 0.55; // Temporal

  // Per-trial multiplicative amplitude factor max(0, 1 + amplitude_jitter * N(0,1)),
  // drawn independently for the class signature and for each background band.
  double amplitude_jitter = 0.3;

  std::uint64_t seed = 1;

  void validate() const {
    acquisition.validate();
    if (n_trials_per_class <= 0) throw Error(ErrorCode::InvalidConfig, "n_trials_per_class must be positive");
    if (!(misarticulation_rate > 0.0 && misarticulation_rate < 1.0))
      throw Error(ErrorCode::InvalidConfig, "misarticulation_rate must lie in (0,1)");
    if (!(pink_noise_scale > 0.0)) throw Error(ErrorCode::InvalidConfig, "pink_noise_scale must be positive");
    if (!(class_signature_amp > 0.0)) throw Error(ErrorCode::InvalidConfig, "class_signature_amp must be positive");
    if (!(delta_gain_mis >= 1.0) || !(alpha_gain_mis >= 1.0))
      throw Error(ErrorCode::InvalidConfig, "delta/alpha gains must be >= 1");
    if (!(gamma_gain_mis > 0.0 && gamma_gain_mis <= 1.0))
      throw Error(ErrorCode::InvalidConfig, "gamma gain must lie in (0,1]");
    if (amplitude_jitter < 0.0) throw Error(ErrorCode::InvalidConfig, "amplitude_jitter must be >= 0");
    const auto bands = spectral::default_bands();
    const auto& theta = spectral::find_band(bands, "theta");
    const auto& beta = spectral::find_band(bands, "beta");
    for (const auto& freqs : class_signature_freqs_hz) {
      if (freqs.empty()) throw Error(ErrorCode::InvalidConfig, "every class needs a signature frequency");
      for (double f : freqs) {
        if (f < acquisition.band_low_hz || f > acquisition.band_high_hz)
          throw Error(ErrorCode::InvalidConfig, "signature frequency outside acquisition band");
        if (!theta.contains(f) && !beta.contains(f))
          throw Error(ErrorCode::InvalidConfig, "signature frequency " + std::to_string(f) + " Hz not in theta/beta");
      }
    }
  }
};

namespace detail {

inline double jitter_factor(Rng& rng, double jitter) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return std::max(0.0, 1.0 + jitter * normal(rng));
}

/// sin(w i) and cos(w i) for one frequency, so per-channel phases cost a multiply-add instead of a sin call.
struct SinusoidTable {
  std::vector<double> s, c;
  SinusoidTable(double freq_hz, double fs, std::size_t n) : s(n), c(n) {
    const double w = 2.0 * std::numbers::pi * freq_hz / fs;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = std::sin(w * static_cast<double>(i));
      c[i] = std::cos(w * static_cast<double>(i));
    }
  }
  // amp * sin(w i + phase)
  void add(std::span<double> out, double amp, double phase) const {
    const double a = amp * std::cos(phase), b = amp * std::sin(phase);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * s[i] + b * c[i];
  }
};

inline std::vector<SinusoidTable> tables(std::span<const double> freqs, double fs, std::size_t n) {
  std::vector<SinusoidTable> out;
  out.reserve(freqs.size());
  for (double f : freqs) out.emplace_back(f, fs, n);
  return out;
}

}  // namespace detail

/// Synthesizes one trial. The sequence of random draws does not depend on `domain`,
/// so two calls with equally seeded generators differ only in the domain gains.
inline TrialRecord generate_trial(std::uint64_t trial_id, int class_label, Domain domain, const SynthConfig& config,
                                  const Montage& montage, Rng& rng) {
  if (class_label < 0 || class_label >= kNumClasses) throw Error(ErrorCode::InvalidConfig, "class label out of range");
  const auto& spec = config.acquisition;
  if (spec.n_channels != montage.size())
    throw Error(ErrorCode::InvalidConfig, "n_channels must equal the montage size");
  const std::size_t n = spec.n_samples();
  const double fs = spec.sample_rate_hz;
  const bool mis = domain == Domain::Misarticulated;
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);

  const auto& sig_freqs = config.class_signature_freqs_hz[class_label];
  std::vector<double> sig_phase(sig_freqs.size());
  const double sig_amp = config.class_signature_amp * detail::jitter_factor(rng, config.amplitude_jitter);
  for (auto& p : sig_phase) p = phase_dist(rng);
  const double delta_amp = config.delta_amp * detail::jitter_factor(rng, config.amplitude_jitter);
  const double alpha_amp = config.alpha_amp * detail::jitter_factor(rng, config.amplitude_jitter);
  const double gamma_amp = config.gamma_amp * detail::jitter_factor(rng, config.amplitude_jitter);

  TrialRecord trial;
  trial.trial_id = trial_id;
  trial.class_label = class_label;
  trial.domain = domain;
  trial.n_channels = spec.n_channels;
  trial.n_samples = n;
  trial.samples.resize(spec.n_channels * n);

  const auto sig_tab = detail::tables(sig_freqs, fs, n);
  const auto delta_tab = detail::tables(config.delta_freqs_hz, fs, n);
  const auto alpha_tab = detail::tables(config.alpha_freqs_hz, fs, n);
  const auto gamma_tab = detail::tables(config.gamma_freqs_hz, fs, n);

  std::vector<double> x;
  for (std::size_t ch = 0; ch < spec.n_channels; ++ch) {
    const Region region = montage.entries()[ch].pos.region;
    x = pink_noise(n, rng);
    for (auto& v : x) v *= config.pink_noise_scale;
    for (std::size_t i = 0; i < sig_tab.size(); ++i) sig_tab[i].add(x, sig_amp, sig_phase[i]);

    const double delta_gain = mis && region == Region::FrontalCentral ? config.delta_gain_mis : 1.0;
    const double alpha_gain = mis && region == Region::FrontalCentral ? config.alpha_gain_mis : 1.0;
    const double gamma_gain = mis && region == Region::Temporal ? config.gamma_gain_mis : 1.0;
    for (const auto& t : delta_tab) t.add(x, delta_amp * delta_gain, phase_dist(rng));
    for (const auto& t : alpha_tab) t.add(x, alpha_amp * alpha_gain, phase_dist(rng));
    for (const auto& t : gamma_tab) t.add(x, gamma_amp * gamma_gain, phase_dist(rng));

    auto out = trial.channel(ch);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<float>(x[i]);
  }
  return trial;
}

/// Random stream for one trial: seed XOR hash(trial_id), so trials can be produced in any order.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial_id) { return Rng(derive_seed(seed, trial_id)); }

/// 4 x n_trials_per_class trials, class-major ids; domain ~ Bernoulli(misarticulation_rate).
inline Dataset generate_dataset(const SynthConfig& config, const Montage& montage = Montage::standard64()) {
  config.validate();
  Dataset ds;
  ds.spec = config.acquisition;
  ds.channel_names = montage.channel_names();
  std::uint64_t id = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    for (int r = 0; r < config.n_trials_per_class; ++r, ++id) {
      Rng rng = trial_rng(config.seed, id);
      std::bernoulli_distribution is_mis(config.misarticulation_rate);
      const Domain domain = is_mis(rng) ? Domain::Misarticulated : Domain::Correct;
      ds.trials.push_back(generate_trial(id, c, domain, config, montage, rng));
    }
  }
  return ds;
}

}  // namespace eegintent::synth
