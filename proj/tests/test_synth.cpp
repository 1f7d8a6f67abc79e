#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "eegintent/spectral/bands.hpp"
#include "eegintent/spectral/welch.hpp"
#include "eegintent/synth/generator.hpp"
#include "eegintent/synth/pink_noise.hpp"
#include "oracles.hpp"

using namespace eegintent;
using namespace eegintent::synth;

namespace {

double region_band_power(const TrialRecord& t, const Montage& m, Region region, const spectral::Band& band) {
  double total = 0.0;
  int n = 0;
  for (std::size_t ch = 0; ch < m.size(); ++ch) {
    if (m.entries()[ch].pos.region != region) continue;
    const auto psd = spectral::welch_psd(t.channel(ch), spectral::WelchConfig{}, 500.0);
    total += spectral::band_power(psd.density, psd.freqs_hz, band);
    ++n;
  }
  return total / n;
}

/// Channel-averaged Welch PSD of one trial.
spectral::Psd mean_psd(const TrialRecord& t) {
  spectral::Psd acc;
  for (std::size_t ch = 0; ch < t.n_channels; ++ch) {
    const auto psd = spectral::welch_psd(t.channel(ch), spectral::WelchConfig{}, 500.0);
    if (acc.density.empty()) acc = {std::vector<double>(psd.density.size(), 0.0), psd.freqs_hz};
    for (std::size_t k = 0; k < psd.density.size(); ++k) acc.density[k] += psd.density[k] / t.n_channels;
  }
  return acc;
}

}  // namespace

TEST(PinkNoise, SlopeNearMinusOne) {
  const std::size_t n = 1500;
  const double fs = 500.0;
  std::vector<double> avg(n / 2 + 1, 0.0);
  Rng rng(17);
  for (int r = 0; r < 200; ++r) {
    const auto p = oracle::periodogram(pink_noise(n, rng));
    for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += p[k] / 200.0;
  }
  std::vector<double> lf, lp;
  for (std::size_t k = 1; k < avg.size(); ++k) {
    const double f = k * fs / n;
    if (f < 1.0 || f > 50.0) continue;
    lf.push_back(std::log10(f));
    lp.push_back(std::log10(avg[k]));
  }
  EXPECT_NEAR(oracle::ls_slope(lf, lp), -1.0, 0.4);
}

TEST(PinkNoise, ZeroMeanUnitScaleAndDeterministic) {
  Rng a(5), b(5);
  const auto x = pink_noise(1500, a), y = pink_noise(1500, b);
  EXPECT_EQ(x, y);
  double mean = 0.0;
  for (double v : x) mean += v / x.size();
  EXPECT_NEAR(mean, 0.0, 1e-12);
}

TEST(PinkNoise, TwoSamples) {
  Rng rng(1);
  const auto x = pink_noise(2, rng);
  ASSERT_EQ(x.size(), 2u);
  EXPECT_TRUE(std::isfinite(x[0]) && std::isfinite(x[1]));
  EXPECT_NEAR(x[0] + x[1], 0.0, 1e-15);
}

TEST(Generator, MisarticulationRaisesFrontalDelta) {
  const auto& m = Montage::standard64();
  SynthConfig cfg;
  const auto bands = spectral::default_bands();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng r1 = trial_rng(seed, 0), r2 = trial_rng(seed, 0);
    const auto correct = generate_trial(0, 2, Domain::Correct, cfg, m, r1);
    const auto mis = generate_trial(0, 2, Domain::Misarticulated, cfg, m, r2);
    const auto& delta = spectral::find_band(bands, "delta");
    const auto& alpha = spectral::find_band(bands, "alpha");
    const auto& gamma = spectral::find_band(bands, "gamma");
    EXPECT_GT(region_band_power(mis, m, Region::FrontalCentral, delta),
              region_band_power(correct, m, Region::FrontalCentral, delta));
    EXPECT_GT(region_band_power(mis, m, Region::FrontalCentral, alpha),
              region_band_power(correct, m, Region::FrontalCentral, alpha));
    EXPECT_LT(region_band_power(mis, m, Region::Temporal, gamma),
              region_band_power(correct, m, Region::Temporal, gamma));
    // Channels outside both regions are untouched.
    std::size_t ch = 0;
    while (m.entries()[ch].name != "O1") ++ch;
    const auto a = correct.channel(ch), b = mis.channel(ch);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST(Generator, NullGainsMakeDomainsIdentical) {
  SynthConfig cfg;
  cfg.delta_gain_mis = cfg.alpha_gain_mis = cfg.gamma_gain_mis = 1.0;
  Rng r1 = trial_rng(3, 9), r2 = trial_rng(3, 9);
  const auto a = generate_trial(9, 1, Domain::Correct, cfg, Montage::standard64(), r1);
  const auto b = generate_trial(9, 1, Domain::Misarticulated, cfg, Montage::standard64(), r2);
  EXPECT_EQ(a.samples, b.samples);
}

TEST(Generator, ClassSignaturePeaks) {
  // Peak-bin oracle on the ratio of two class spectra: the shared 1/f background and
  // band components cancel, leaving each class's signature lines.
  SynthConfig cfg;
  const auto& m = Montage::standard64();
  auto class_psd = [&](int c) {
    std::vector<double> acc;
    spectral::Psd one;
    for (std::uint64_t r = 0; r < 10; ++r) {
      Rng rng = trial_rng(7, 100 * c + r);
      one = mean_psd(generate_trial(r, c, Domain::Correct, cfg, m, rng));
      if (acc.empty()) acc.assign(one.density.size(), 0.0);
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += one.density[k];
    }
    return std::pair{acc, one.freqs_hz};
  };
  const auto [p0, freqs] = class_psd(0);
  const auto p1 = class_psd(1).first;
  auto peak = [&](const std::vector<double>& num, const std::vector<double>& den, double lo, double hi) {
    std::size_t best = 0;
    for (std::size_t k = 0; k < freqs.size(); ++k)
      if (freqs[k] >= lo && freqs[k] < hi && (best == 0 || num[k] / den[k] > num[best] / den[best])) best = k;
    return freqs[best];
  };
  const double df = 500.0 / 512.0;
  EXPECT_NEAR(peak(p0, p1, 13.0, 30.0), 16.0, df);
  EXPECT_NEAR(peak(p1, p0, 13.0, 30.0), 19.5, df);
  EXPECT_NEAR(peak(p0, p1, 4.0, 8.0), 5.9, df);
  EXPECT_NEAR(peak(p1, p0, 4.0, 8.0), 6.8, df);
}

TEST(Generator, DefaultSizing) {
  SynthConfig cfg;
  const auto ds = generate_dataset(cfg);
  ASSERT_EQ(ds.trials.size(), 200u);
  std::array<int, kNumClasses> per{};
  for (std::size_t i = 0; i < ds.trials.size(); ++i) {
    EXPECT_EQ(ds.trials[i].trial_id, i);
    EXPECT_EQ(ds.trials[i].n_samples, 1500u);
    ++per[ds.trials[i].class_label];
  }
  for (int n : per) EXPECT_EQ(n, 50);
  EXPECT_NO_THROW(validate_dataset(ds));
}

TEST(Generator, MisarticulationRateWithinBinomialBand) {
  SynthConfig cfg;
  cfg.n_trials_per_class = 50;
  int mis = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.seed = seed;
    // Domains are the first draw of each trial stream, so no samples need generating.
    for (std::uint64_t id = 0; id < 200; ++id) {
      Rng rng = trial_rng(seed, id);
      std::bernoulli_distribution d(cfg.misarticulation_rate);
      mis += d(rng);
      ++total;
    }
  }
  const double p = cfg.misarticulation_rate;
  const double half = 2.5758 * std::sqrt(p * (1 - p) / total);
  EXPECT_NEAR(static_cast<double>(mis) / total, p, half);

  // ...and generate_dataset agrees with that draw.
  cfg.seed = 4;
  cfg.n_trials_per_class = 5;
  for (const auto& t : generate_dataset(cfg).trials) {
    Rng rng = trial_rng(4, t.trial_id);
    std::bernoulli_distribution d(cfg.misarticulation_rate);
    EXPECT_EQ(t.domain, d(rng) ? Domain::Misarticulated : Domain::Correct);
  }
}

TEST(Generator, ConcurrentMatchesSequential) {
  SynthConfig cfg;
  cfg.n_trials_per_class = 3;
  cfg.seed = 12;
  const auto ds = generate_dataset(cfg);
  std::vector<TrialRecord> par(ds.trials.size());
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < ds.trials.size(); ++i)
    workers.emplace_back([&, i] {
      Rng rng = trial_rng(cfg.seed, i);
      std::bernoulli_distribution d(cfg.misarticulation_rate);
      const Domain dom = d(rng) ? Domain::Misarticulated : Domain::Correct;
      par[i] = generate_trial(i, static_cast<int>(i) / 3, dom, cfg, Montage::standard64(), rng);
    });
  for (auto& w : workers) w.join();
  EXPECT_EQ(par, ds.trials);
}

TEST(Generator, SeedsDiffer) {
  SynthConfig a, b;
  a.n_trials_per_class = b.n_trials_per_class = 1;
  b.seed = 2;
  EXPECT_NE(generate_dataset(a).trials[0].samples, generate_dataset(b).trials[0].samples);
  EXPECT_EQ(generate_dataset(a), generate_dataset(a));
}

TEST(Generator, ConfigValidation) {
  SynthConfig cfg;
  cfg.misarticulation_rate = 1.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.class_signature_freqs_hz[2] = {10.0};  // alpha, not theta/beta
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.gamma_gain_mis = 1.2;
  EXPECT_THROW(cfg.validate(), Error);
}
