#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "eegintent/error.hpp"

namespace eegintent {

enum class Region { FrontalCentral, Temporal, Other };

constexpr std::string_view to_string(Region r) {
  switch (r) {
    case Region::FrontalCentral: return "FrontalCentral";
    case Region::Temporal: return "Temporal";
    case Region::Other: return "Other";
  }
  return "Other";
}

struct ChannelPosition {
  double x = 0.0;  // + toward the right ear
  double y = 0.0;  // + toward the nose
  Region region = Region::Other;
};

struct MontageEntry {
  std::string name;
  ChannelPosition pos;
};

/// Fixed 64-site 10-10 montage with 2-D scalp projections.
///
/// Sites are placed on a unit sphere: each electrode row (AF, F, FC, C, CP, P, PO)
/// runs from its midline site to its site on the 90-degree ring, with lateral
/// sites at equal arc steps. The projection is azimuthal equidistant with
/// radius = polar angle / 100 degrees, so the vertex (Cz) sits at the origin and
/// ring sites (T7, O1, ...) at radius 0.9.
class Montage {
 public:
  static const Montage& standard64() {
    static const Montage m = build();
    return m;
  }

  std::size_t size() const { return entries_.size(); }
  const std::vector<MontageEntry>& entries() const { return entries_; }

  std::vector<std::string> channel_names() const {
    std::vector<std::string> names;
    names.reserve(entries_.size());
    for (const auto& e : entries_) names.push_back(e.name);
    return names;
  }

  bool contains(std::string_view name) const { return find(name) != nullptr; }

  const MontageEntry* find(std::string_view name) const {
    for (const auto& e : entries_)
      if (e.name == name) return &e;
    return nullptr;
  }

  std::vector<std::string> region_channels(Region r) const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
      if (e.pos.region == r) out.push_back(e.name);
    return out;
  }

 private:
  struct Vec3 {
    double x, y, z;
  };

  static Vec3 sphere(double polar_deg, double azimuth_deg) {
    const double d = std::numbers::pi / 180.0;
    return {std::sin(polar_deg * d) * std::sin(azimuth_deg * d), std::sin(polar_deg * d) * std::cos(azimuth_deg * d),
            std::cos(polar_deg * d)};
  }

  static Vec3 slerp(Vec3 a, Vec3 b, double t) {
    const double dot = std::clamp(a.x * b.x + a.y * b.y + a.z * b.z, -1.0, 1.0);
    const double omega = std::acos(dot);
    if (omega < 1e-12) return a;
    const double wa = std::sin((1 - t) * omega) / std::sin(omega);
    const double wb = std::sin(t * omega) / std::sin(omega);
    return {wa * a.x + wb * b.x, wa * a.y + wb * b.y, wa * a.z + wb * b.z};
  }

  static ChannelPosition project(Vec3 v, Region region) {
    const double polar_deg = std::acos(std::clamp(v.z, -1.0, 1.0)) * 180.0 / std::numbers::pi;
    const double r = polar_deg / 100.0;
    const double h = std::hypot(v.x, v.y);
    if (h < 1e-12) return {0.0, 0.0, region};
    auto snap = [](double c) { return std::abs(c) < 1e-12 ? 0.0 : c; };
    return {snap(r * v.x / h), snap(r * v.y / h), region};
  }

  static Region region_of(std::string_view name) {
    static constexpr std::array<std::string_view, 11> frontal_central{"Fz",  "F1",  "F2",  "FCz", "FC1", "FC2",
                                                                      "FC3", "FC4", "Cz",  "C1",  "C2"};
    static constexpr std::array<std::string_view, 6> temporal{"FT7", "FT8", "T7", "T8", "TP7", "TP8"};
    for (auto n : frontal_central)
      if (n == name) return Region::FrontalCentral;
    for (auto n : temporal)
      if (n == name) return Region::Temporal;
    return Region::Other;
  }

  static Montage build() {
    Montage m;
    auto add = [&](std::string name, Vec3 v) {
      auto region = region_of(name);
      m.entries_.push_back({std::move(name), project(v, region)});
    };

    // Row layout: prefix, midline polar angle (signed, + frontal), ring azimuth
    // of the right-hand end site, lateral steps kept (1..4, 4 = ring site).
    struct Row {
      std::string_view prefix;
      std::string_view ring_left, ring_right;
      double midline_polar;
      double ring_azimuth;
      std::array<int, 4> steps;  // 0 = unused slot
    };
    const std::array<Row, 7> rows{{
        {"AF", "AF7", "AF8", 67.5, 36.0, {2, 3, 4, 0}},
        {"F", "F7", "F8", 45.0, 54.0, {1, 2, 3, 4}},
        {"FC", "FT7", "FT8", 22.5, 72.0, {1, 2, 3, 4}},
        {"C", "T7", "T8", 0.0, 90.0, {1, 2, 3, 4}},
        {"CP", "TP7", "TP8", -22.5, 108.0, {1, 2, 3, 4}},
        {"P", "P7", "P8", -45.0, 126.0, {1, 2, 3, 4}},
        {"PO", "PO7", "PO8", -67.5, 144.0, {2, 3, 4, 0}},
    }};

    add("Fp1", sphere(90.0, -18.0));
    add("Fp2", sphere(90.0, 18.0));
    for (const auto& row : rows) {
      const Vec3 mid = row.midline_polar >= 0 ? sphere(row.midline_polar, 0.0) : sphere(-row.midline_polar, 180.0);
      add(std::string(row.prefix) + "z", mid);
      for (int step : row.steps) {
        if (step == 0) continue;
        const double t = step / 4.0;
        const Vec3 right = slerp(mid, sphere(90.0, row.ring_azimuth), t);
        const Vec3 left = slerp(mid, sphere(90.0, -row.ring_azimuth), t);
        if (step == 4) {
          add(std::string(row.ring_left), left);
          add(std::string(row.ring_right), right);
        } else {
          // 10-10 numbering: odd on the left, even on the right, growing outward.
          add(std::string(row.prefix) + std::to_string(2 * step - 1), left);
          add(std::string(row.prefix) + std::to_string(2 * step), right);
        }
      }
    }
    add("O1", sphere(90.0, -162.0));
    add("Oz", sphere(90.0, 180.0));
    add("O2", sphere(90.0, 162.0));
    return m;
  }

  std::vector<MontageEntry> entries_;
};

/// Stored coordinates and region tag for `name`.
inline ChannelPosition channel_position(const Montage& montage, std::string_view name) {
  const auto* e = montage.find(name);
  if (!e) throw Error(ErrorCode::UnknownChannel, std::string(name));
  return e->pos;
}

}  // namespace eegintent
