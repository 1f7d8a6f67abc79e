#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eegintent/core/acquisition.hpp"
#include "eegintent/core/montage.hpp"
#include "eegintent/error.hpp"

namespace eegintent {

inline constexpr int kNumClasses = 4;
inline constexpr int kNumDomains = 2;

enum class Domain : std::uint8_t { Correct = 0, Misarticulated = 1 };

constexpr std::string_view to_string(Domain d) {
  return d == Domain::Correct ? "correct" : "misarticulated";
}

inline Domain parse_domain(std::string_view s) {
  if (s == "correct") return Domain::Correct;
  if (s == "misarticulated") return Domain::Misarticulated;
  throw Error(ErrorCode::MalformedManifest, "unknown domain label '" + std::string(s) + "'");
}

/// One epoch. Samples are microvolts, channel-major: samples[ch * n_samples + t].
struct TrialRecord {
  std::uint64_t trial_id = 0;
  int class_label = 0;
  Domain domain = Domain::Correct;
  std::size_t n_channels = 0;
  std::size_t n_samples = 0;
  std::vector<float> samples;

  std::span<const float> channel(std::size_t ch) const {
    return std::span<const float>(samples).subspan(ch * n_samples, n_samples);
  }
  std::span<float> channel(std::size_t ch) { return std::span<float>(samples).subspan(ch * n_samples, n_samples); }

  bool operator==(const TrialRecord&) const = default;
};

struct Dataset {
  AcquisitionSpec spec;
  std::vector<std::string> channel_names;
  std::vector<TrialRecord> trials;

  bool operator==(const Dataset&) const = default;
};

/// Checks one trial against the acquisition spec.
inline void validate_trial(const TrialRecord& trial, const AcquisitionSpec& spec) {
  if (trial.class_label < 0 || trial.class_label >= kNumClasses)
    throw Error(ErrorCode::MalformedManifest, "class label out of range", trial.trial_id);
  if (trial.n_channels != spec.n_channels || trial.n_samples != spec.n_samples() ||
      trial.samples.size() != spec.n_channels * spec.n_samples())
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(spec.n_channels) + "x" + std::to_string(spec.n_samples()) + " samples",
                trial.trial_id);
  for (float v : trial.samples)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteSample, "", trial.trial_id);
}

/// Checks every dataset invariant: spec, channel names against the montage, trial shapes, id uniqueness.
inline void validate_dataset(const Dataset& ds, const Montage& montage = Montage::standard64()) {
  ds.spec.validate();
  if (ds.channel_names.size() != ds.spec.n_channels)
    throw Error(ErrorCode::DimensionMismatch, "channel_names size differs from n_channels");
  std::set<std::string> seen_names;
  for (const auto& n : ds.channel_names) {
    if (!montage.contains(n)) throw Error(ErrorCode::UnknownChannel, n);
    if (!seen_names.insert(n).second) throw Error(ErrorCode::MalformedManifest, "duplicate channel " + n);
  }
  std::set<std::uint64_t> seen_ids;
  for (const auto& t : ds.trials) {
    if (!seen_ids.insert(t.trial_id).second)
      throw Error(ErrorCode::MalformedManifest, "duplicate trial_id", t.trial_id);
    validate_trial(t, ds.spec);
  }
}

}  // namespace eegintent
