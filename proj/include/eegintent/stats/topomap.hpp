#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "eegintent/core/montage.hpp"
#include "eegintent/spectral/bands.hpp"
#include "eegintent/spectral/features.hpp"
#include "eegintent/stats/fdr.hpp"
#include "eegintent/stats/ttest.hpp"

namespace eegintent::stats {

struct ChannelStat {
  std::string channel;
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  bool significant = false;
};

struct TTestMap {
  std::string band;
  std::vector<ChannelStat> channels;
};

/// log10 band power per trial, laid out [trial][band][channel].
struct BandPowers {
  std::vector<std::string> channel_names;
  std::vector<std::string> band_names;
  std::vector<std::vector<double>> trials;

  double at(std::size_t trial, std::size_t band, std::size_t ch) const {
    return trials[trial][band * channel_names.size() + ch];
  }
};

/// Splits a feature set by domain into (correct, misarticulated) log band-power tables.
inline std::pair<BandPowers, BandPowers> band_powers_by_domain(const spectral::FeatureSet& fs,
                                                               const spectral::BandTable& bands) {
  BandPowers correct, mis;
  for (auto* bp : {&correct, &mis}) {
    bp->channel_names = fs.channel_names;
    for (const auto& b : bands) bp->band_names.push_back(b.name);
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::vector<double> row;
    row.reserve(bands.size() * fs.n_channels());
    for (const auto& b : bands)
      for (std::size_t ch = 0; ch < fs.n_channels(); ++ch)
        row.push_back(std::log10(spectral::feature_band_power(fs, i, ch, b)));
    (fs.trials[i].domain == Domain::Correct ? correct : mis).trials.push_back(std::move(row));
  }
  return {std::move(correct), std::move(mis)};
}

/// One Welch t-test per band x channel (t > 0: higher power in `misarticulated`),
/// BH-corrected as a single family across every band and channel.
inline std::vector<TTestMap> band_topomaps(const BandPowers& correct, const BandPowers& misarticulated,
                                           const Montage& montage, double alpha) {
  if (correct.trials.size() < 2 || misarticulated.trials.size() < 2)
    throw Error(ErrorCode::InsufficientTrials, std::to_string(correct.trials.size()) + " correct / " +
                                                   std::to_string(misarticulated.trials.size()) + " misarticulated");
  if (correct.channel_names != misarticulated.channel_names || correct.band_names != misarticulated.band_names)
    throw Error(ErrorCode::ShapeMismatch, "groups disagree on channels or bands");

  const std::size_t n_ch = correct.channel_names.size();
  std::vector<TTestMap> maps;
  std::vector<double> p_all;
  std::vector<double> a(misarticulated.trials.size()), b(correct.trials.size());
  for (std::size_t band = 0; band < correct.band_names.size(); ++band) {
    TTestMap map{correct.band_names[band], {}};
    for (std::size_t ch = 0; ch < n_ch; ++ch) {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = misarticulated.at(i, band, ch);
      for (std::size_t i = 0; i < b.size(); ++i) b[i] = correct.at(i, band, ch);
      const auto res = welch_t_test(a, b);
      const auto pos = channel_position(montage, correct.channel_names[ch]);
      map.channels.push_back({correct.channel_names[ch], pos.x, pos.y, res.t, res.p_two_sided, 1.0, false});
      p_all.push_back(res.p_two_sided);
    }
    maps.push_back(std::move(map));
  }

  const auto fdr = bh_fdr(p_all, alpha);
  std::size_t k = 0;
  for (auto& map : maps)
    for (auto& c : map.channels) {
      c.p_adjusted = fdr.adjusted[k];
      c.significant = fdr.reject[k];
      ++k;
    }
  return maps;
}

inline std::vector<TTestMap> band_topomaps(const spectral::FeatureSet& fs, const Montage& montage,
                                           const spectral::BandTable& bands, double alpha) {
  const auto [correct, mis] = band_powers_by_domain(fs, bands);
  return band_topomaps(correct, mis, montage, alpha);
}

inline std::string topomap_csv(const TTestMap& map) {
  std::ostringstream os;
  os << "channel,x,y,t,p_raw,p_adjusted,significant\n";
  char buf[256];
  for (const auto& c : map.channels) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6e,%.6e,%d\n", c.channel.c_str(), c.x, c.y, c.t, c.p_raw,
                  c.p_adjusted, c.significant ? 1 : 0);
    os << buf;
  }
  return os.str();
}

namespace detail {

// Blue (-limit) -> white (0) -> red (+limit).
inline std::string diverging_color(double t, double limit) {
  const double v = std::clamp(t / limit, -1.0, 1.0);
  int r = 255, g = 255, b = 255;
  if (v > 0) {
    g = b = static_cast<int>(std::lround(255.0 * (1.0 - v)));
  } else if (v < 0) {
    r = g = static_cast<int>(std::lround(255.0 * (1.0 + v)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace detail

/// Renders one map as SVG. `t_limit` <= 0 picks max |t| (or 1 for an all-zero map).
inline std::string render_topomap_svg(const TTestMap& map, double t_limit = 0.0) {
  double limit = t_limit;
  if (!(limit > 0)) {
    limit = 0.0;
    for (const auto& c : map.channels) limit = std::max(limit, std::abs(c.t));
    if (!(limit > 0)) limit = 1.0;
  }
  constexpr double kSize = 400.0, kCentre = 200.0, kRadius = 170.0;
  std::ostringstream os;
  char buf[512];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"440\" viewBox=\"0 0 400 440\">\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"425\" text-anchor=\"middle\" font-size=\"16\">%s (t, limit %.2f)</text>\n",
                kSize / 2, map.band.c_str(), limit);
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"%.1f\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"/>\n",
                kCentre, kCentre, kRadius);
  os << buf;
  std::snprintf(buf, sizeof buf, "<polyline points=\"%.1f,%.1f %.1f,%.1f %.1f,%.1f\" fill=\"none\" stroke=\"#000000\"/>\n",
                kCentre - 12, kCentre - kRadius + 1, kCentre, kCentre - kRadius - 14, kCentre + 12, kCentre - kRadius + 1);
  os << buf;
  for (const auto& c : map.channels) {
    // Montage radius 1.0 maps to 1.05x the head outline so ring sites sit just inside it.
    const double px = kCentre + c.x * kRadius / 1.05;
    const double py = kCentre - c.y * kRadius / 1.05;
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"9\" fill=\"%s\" stroke=\"#555555\"><title>%s t=%.3f</title></circle>\n",
                  px, py, detail::diverging_color(c.t, limit).c_str(), c.channel.c_str(), c.t);
    os << buf;
    if (c.significant) {
      std::snprintf(buf, sizeof buf,
                    "<text class=\"sig\" x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" font-size=\"14\">+</text>\n", px,
                    py + 5);
      os << buf;
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace eegintent::stats
