#include <gtest/gtest.h>

#include <random>

#include "eegintent/stats/fdr.hpp"
#include "eegintent/stats/student_t.hpp"
#include "eegintent/stats/topomap.hpp"
#include "eegintent/stats/ttest.hpp"
#include "eegintent/synth/generator.hpp"
#include "oracles.hpp"

using namespace eegintent;
using namespace eegintent::stats;

namespace {

std::size_t count_plus(const std::string& svg) { return std::count(svg.begin(), svg.end(), '+'); }

BandPowers random_group(std::size_t n_trials, std::size_t n_bands, std::uint64_t seed, double shift = 0.0) {
  BandPowers bp;
  bp.channel_names = Montage::standard64().channel_names();
  for (std::size_t b = 0; b < n_bands; ++b) bp.band_names.push_back("b" + std::to_string(b));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(shift, 1.0);
  for (std::size_t i = 0; i < n_trials; ++i) {
    std::vector<double> row(n_bands * 64);
    for (auto& v : row) v = g(rng);
    bp.trials.push_back(row);
  }
  return bp;
}

}  // namespace

TEST(StudentT, SpotValueMatchesQuadrature) {
  const double p = student_t_two_sided_p(2.0, 10.0);
  EXPECT_NEAR(p, 0.0734, 5e-5);
  EXPECT_NEAR(p, oracle::student_t_p_by_quadrature(2.0, 10.0), 1e-6);
}

TEST(StudentT, GridMatchesQuadrature) {
  for (double df : {1.0, 2.5, 7.0, 30.0, 120.0})
    for (double t : {0.0, 0.3, 1.0, 2.2, 4.0, 9.0})
      EXPECT_NEAR(student_t_two_sided_p(t, df), oracle::student_t_p_by_quadrature(t, df), 1e-6) << t << " " << df;
}

TEST(StudentT, SymmetricAndCdf) {
  EXPECT_EQ(student_t_two_sided_p(1.3, 6.0), student_t_two_sided_p(-1.3, 6.0));
  EXPECT_NEAR(student_t_cdf(0.0, 4.0), 0.5, 1e-15);
  EXPECT_NEAR(student_t_cdf(2.0, 10.0), 1.0 - oracle::student_t_p_by_quadrature(2.0, 10.0) / 2.0, 1e-6);
  EXPECT_NEAR(incomplete_beta(2.0, 3.0, 0.4), 0.5248, 1e-12);  // 6x^2 - 8x^3 + 3x^4 at 0.4
}

TEST(WelchT, IdenticalSamples) {
  const std::vector<double> a{1, 2, 3, 4};
  const auto r = welch_t_test(a, a);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_NEAR(r.p_two_sided, 1.0, 1e-15);
}

TEST(WelchT, ShiftedSequences) {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{2, 3, 4, 5, 6};
  const auto r = welch_t_test(a, b);
  EXPECT_NEAR(r.t, -1.0, 1e-12);
  EXPECT_NEAR(r.df, 8.0, 1e-12);
  EXPECT_NEAR(r.p_two_sided, 0.3466, 5e-5);
  EXPECT_NEAR(r.p_two_sided, oracle::student_t_p_by_quadrature(-1.0, 8.0), 1e-6);
}

TEST(WelchT, SatterthwaiteUnequalGroups) {
  const std::vector<double> a{0.2, 1.9, -0.4, 3.3, 2.2, 0.8}, b{5.0, 5.1, 4.7};
  const auto r = welch_t_test(a, b);
  double ma = 0, mb = 0;
  for (double v : a) ma += v / 6;
  for (double v : b) mb += v / 3;
  double sa = 0, sb = 0;
  for (double v : a) sa += (v - ma) * (v - ma) / 5;
  for (double v : b) sb += (v - mb) * (v - mb) / 2;
  const double qa = sa / 6, qb = sb / 3;
  EXPECT_NEAR(r.t, (ma - mb) / std::sqrt(qa + qb), 1e-12);
  EXPECT_NEAR(r.df, (qa + qb) * (qa + qb) / (qa * qa / 5 + qb * qb / 2), 1e-10);
}

TEST(WelchT, Errors) {
  const std::vector<double> one{1.0}, two{1.0, 2.0}, flat{3.0, 3.0, 3.0};
  try {
    welch_t_test(one, two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientTrials);
  }
  try {
    welch_t_test(flat, flat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateSample);
  }
}

TEST(Bh, AllRejected) {
  const std::vector<double> p{0.01, 0.02, 0.03, 0.04};
  const auto r = bh_fdr(p, 0.05);
  EXPECT_EQ(r.reject, oracle::bh_reject_by_definition(p, 0.05));
  for (bool b : r.reject) EXPECT_TRUE(b);
}

TEST(Bh, NoneRejected) {
  const std::vector<double> p{0.2, 0.5, 0.9};
  const auto r = bh_fdr(p, 0.05);
  EXPECT_EQ(r.reject, oracle::bh_reject_by_definition(p, 0.05));
  for (bool b : r.reject) EXPECT_FALSE(b);
  EXPECT_NEAR(r.adjusted[0], 0.6, 1e-15);
  EXPECT_NEAR(r.adjusted[1], 0.75, 1e-15);
  EXPECT_NEAR(r.adjusted[2], 0.9, 1e-15);
}

TEST(Bh, Extremes) {
  const auto r = bh_fdr(std::vector<double>{0.0, 1.0}, 0.01);
  EXPECT_EQ(r.reject, (std::vector<bool>{true, false}));
}

TEST(Bh, RandomMatchesDefinitionAndContainsBonferroni) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> p(1 + rep % 40);
    for (auto& v : p) v = std::pow(u(rng), 3.0);
    if (rep % 5 == 0) p[0] = p.back();  // ties
    const auto r = bh_fdr(p, 0.05);
    EXPECT_EQ(r.reject, oracle::bh_reject_by_definition(p, 0.05));
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return p[i] < p[j]; });
    for (std::size_t k = 1; k < order.size(); ++k) EXPECT_LE(r.adjusted[order[k - 1]], r.adjusted[order[k]]);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_LE(r.adjusted[i], 1.0);
      if (p[i] * p.size() <= 0.05) {
        EXPECT_TRUE(r.reject[i]);
      }
    }
  }
}

TEST(Topomap, AntisymmetricUnderSwap) {
  const auto a = random_group(12, 2, 1, 0.4), b = random_group(9, 2, 2);
  const auto ab = band_topomaps(b, a, Montage::standard64(), 0.05);
  const auto ba = band_topomaps(a, b, Montage::standard64(), 0.05);
  ASSERT_EQ(ab.size(), 2u);
  for (std::size_t m = 0; m < ab.size(); ++m)
    for (std::size_t c = 0; c < 64; ++c) {
      EXPECT_EQ(ab[m].channels[c].t, -ba[m].channels[c].t);
      EXPECT_EQ(ab[m].channels[c].p_raw, ba[m].channels[c].p_raw);
      EXPECT_EQ(ab[m].channels[c].significant, ba[m].channels[c].significant);
    }
}

TEST(Topomap, InsufficientTrials) {
  try {
    band_topomaps(random_group(1, 1, 1), random_group(5, 1, 2), Montage::standard64(), 0.05);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientTrials);
  }
}

TEST(Topomap, JointFamilyAcrossBands) {
  // Separate families would use m=64; the joint family uses m = bands * 64.
  const auto maps = band_topomaps(random_group(10, 3, 7), random_group(10, 3, 8, 0.3), Montage::standard64(), 0.05);
  std::vector<double> p;
  for (const auto& m : maps)
    for (const auto& c : m.channels) p.push_back(c.p_raw);
  const auto r = bh_fdr(p, 0.05);
  std::size_t k = 0;
  for (const auto& m : maps)
    for (const auto& c : m.channels) {
      EXPECT_EQ(c.p_adjusted, r.adjusted[k]);
      ++k;
    }
}

TEST(Topomap, NullGeneratorPValuesRoughlyUniform) {
  synth::SynthConfig cfg;
  cfg.n_trials_per_class = 10;
  cfg.delta_gain_mis = cfg.alpha_gain_mis = cfg.gamma_gain_mis = 1.0;
  std::vector<double> p;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    cfg.seed = seed;
    const auto fs = spectral::extract_feature_set(synth::generate_dataset(cfg), spectral::WelchConfig{});
    for (const auto& m : band_topomaps(fs, Montage::standard64(), spectral::default_bands(), 0.05))
      for (const auto& c : m.channels) p.push_back(c.p_raw);
  }
  ASSERT_GE(p.size(), 1000u);
  std::sort(p.begin(), p.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double n = static_cast<double>(p.size());
    ks = std::max({ks, std::abs((i + 1) / n - p[i]), std::abs(p[i] - i / n)});
  }
  EXPECT_LT(ks, 0.1);
}

TEST(Svg, ZeroMapUsesMidpointColour) {
  TTestMap map{"delta", {}};
  for (const auto& e : Montage::standard64().entries()) map.channels.push_back({e.name, e.pos.x, e.pos.y, 0.0});
  const auto svg = render_topomap_svg(map);
  std::size_t pos = 0, white = 0;
  while ((pos = svg.find("fill=\"#ffffff\"", pos)) != std::string::npos) ++white, ++pos;
  EXPECT_EQ(white, 64u);
  EXPECT_EQ(count_plus(svg), 0u);
}

TEST(Svg, OneSignificantChannelOneGlyph) {
  TTestMap map{"alpha", {}};
  for (const auto& e : Montage::standard64().entries()) map.channels.push_back({e.name, e.pos.x, e.pos.y, 0.5});
  map.channels[10].t = 4.2;
  map.channels[10].significant = true;
  const auto svg = render_topomap_svg(map);
  EXPECT_EQ(count_plus(svg), 1u);
  EXPECT_EQ(svg, render_topomap_svg(map));
}

TEST(Svg, ColourScaleEndpoints) {
  EXPECT_EQ(detail::diverging_color(3.0, 3.0), "#ff0000");
  EXPECT_EQ(detail::diverging_color(-9.0, 3.0), "#0000ff");
  EXPECT_EQ(detail::diverging_color(0.0, 3.0), "#ffffff");
}
