#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "eegintent/core/dataset_io.hpp"
#include "eegintent/model/model_io.hpp"
#include "eegintent/spectral/bands.hpp"
#include "eegintent/spectral/welch.hpp"
#include "eegintent/synth/generator.hpp"
#include "eegintent/util/hash.hpp"

namespace eegintent {

/// Everything a pipeline run depends on. Serializes to one JSON document; every field
/// has a default, so `{}` is a complete configuration.
struct RunConfig {
  synth::SynthConfig synth;
  spectral::WelchConfig welch;
  spectral::BandTable bands = spectral::default_bands();
  model::ModelConfig model;
  double test_fraction = 0.2;
  std::uint64_t split_seed = 1;
  double alpha = 0.05;
  std::string output_dir = "out";

  /// Sets every named seed (generator, split, model) to `seed`.
  void set_seed(std::uint64_t seed) {
    synth.seed = seed;
    split_seed = seed;
    model.seed = seed;
  }
};

inline nlohmann::json to_json(const synth::SynthConfig& s) {
  nlohmann::json freqs = nlohmann::json::array();
  for (const auto& f : s.class_signature_freqs_hz) freqs.push_back(f);
  return {{"acquisition", to_json(s.acquisition)},
          {"n_trials_per_class", s.n_trials_per_class},
          {"misarticulation_rate", s.misarticulation_rate},
          {"pink_noise_scale", s.pink_noise_scale},
          {"class_signature_freqs_hz", freqs},
          {"class_signature_amp", s.class_signature_amp},
          {"delta_freqs_hz", s.delta_freqs_hz},
          {"alpha_freqs_hz", s.alpha_freqs_hz},
          {"gamma_freqs_hz", s.gamma_freqs_hz},
          {"delta_amp", s.delta_amp},
          {"alpha_amp", s.alpha_amp},
          {"gamma_amp", s.gamma_amp},
          {"delta_gain_mis", s.delta_gain_mis},
          {"alpha_gain_mis", s.alpha_gain_mis},
          {"gamma_gain_mis", s.gamma_gain_mis},
          {"amplitude_jitter", s.amplitude_jitter},
          {"seed", s.seed}};
}

inline synth::SynthConfig synth_config_from_json(const nlohmann::json& j) {
  synth::SynthConfig s;
  if (j.contains("acquisition")) s.acquisition = acquisition_from_json(j.at("acquisition"));
  s.n_trials_per_class = j.value("n_trials_per_class", s.n_trials_per_class);
  s.misarticulation_rate = j.value("misarticulation_rate", s.misarticulation_rate);
  s.pink_noise_scale = j.value("pink_noise_scale", s.pink_noise_scale);
  if (j.contains("class_signature_freqs_hz")) {
    const auto& f = j.at("class_signature_freqs_hz");
    if (!f.is_array() || f.size() != kNumClasses)
      throw Error(ErrorCode::InvalidConfig, "class_signature_freqs_hz needs one list per class");
    for (int c = 0; c < kNumClasses; ++c) s.class_signature_freqs_hz[c] = f.at(c).get<std::vector<double>>();
  }
  s.class_signature_amp = j.value("class_signature_amp", s.class_signature_amp);
  s.delta_freqs_hz = j.value("delta_freqs_hz", s.delta_freqs_hz);
  s.alpha_freqs_hz = j.value("alpha_freqs_hz", s.alpha_freqs_hz);
  s.gamma_freqs_hz = j.value("gamma_freqs_hz", s.gamma_freqs_hz);
  s.delta_amp = j.value("delta_amp", s.delta_amp);
  s.alpha_amp = j.value("alpha_amp", s.alpha_amp);
  s.gamma_amp = j.value("gamma_amp", s.gamma_amp);
  s.delta_gain_mis = j.value("delta_gain_mis", s.delta_gain_mis);
  s.alpha_gain_mis = j.value("alpha_gain_mis", s.alpha_gain_mis);
  s.gamma_gain_mis = j.value("gamma_gain_mis", s.gamma_gain_mis);
  s.amplitude_jitter = j.value("amplitude_jitter", s.amplitude_jitter);
  s.seed = j.value("seed", s.seed);
  return s;
}

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json bands = nlohmann::json::array();
  for (const auto& b : c.bands) bands.push_back({{"name", b.name}, {"low_hz", b.low_hz}, {"high_hz", b.high_hz}});
  return {{"synth", to_json(c.synth)},
          {"welch", {{"segment_length", c.welch.segment_length}, {"overlap", c.welch.overlap}, {"window", "hann"}}},
          {"bands", bands},
          {"model", model::to_json(c.model)},
          {"test_fraction", c.test_fraction},
          {"split_seed", c.split_seed},
          {"alpha", c.alpha},
          {"output_dir", c.output_dir}};
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    if (j.contains("synth")) c.synth = synth_config_from_json(j.at("synth"));
    if (j.contains("welch")) {
      const auto& w = j.at("welch");
      c.welch.segment_length = w.value("segment_length", c.welch.segment_length);
      c.welch.overlap = w.value("overlap", c.welch.overlap);
      if (w.value("window", std::string("hann")) != "hann")
        throw Error(ErrorCode::InvalidConfig, "only the hann window is supported");
    }
    if (j.contains("bands")) {
      c.bands.clear();
      for (const auto& b : j.at("bands"))
        c.bands.push_back({b.at("name").get<std::string>(), b.at("low_hz").get<double>(), b.at("high_hz").get<double>()});
    }
    if (j.contains("model")) c.model = model::model_config_from_json(j.at("model"));
    c.test_fraction = j.value("test_fraction", c.test_fraction);
    c.split_seed = j.value("split_seed", c.split_seed);
    c.alpha = j.value("alpha", c.alpha);
    c.output_dir = j.value("output_dir", c.output_dir);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  c.synth.validate();
  c.welch.validate();
  spectral::validate_bands(c.bands);
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingFile, path.string());
  try {
    return run_config_from_json(nlohmann::json::parse(io::read_text(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
}

/// Everything that can change a result. output_dir only says where results land.
inline nlohmann::json result_fields(const RunConfig& c) {
  auto j = to_json(c);
  j.erase("output_dir");
  return j;
}

/// FNV-1a of the canonical JSON serialization, output_dir excluded.
inline std::string config_hash(const RunConfig& c) { return hex64(fnv1a64(result_fields(c).dump())); }

}  // namespace eegintent
