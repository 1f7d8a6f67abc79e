#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "eegintent/core/dataset.hpp"
#include "eegintent/util/binary_io.hpp"

namespace eegintent {

using Json = nlohmann::json;

inline Json to_json(const AcquisitionSpec& s) {
  return {{"sample_rate_hz", s.sample_rate_hz},
          {"n_channels", s.n_channels},
          {"trial_seconds", s.trial_seconds},
          {"band_low_hz", s.band_low_hz},
          {"band_high_hz", s.band_high_hz}};
}

inline AcquisitionSpec acquisition_from_json(const Json& j) {
  AcquisitionSpec s;
  s.sample_rate_hz = j.value("sample_rate_hz", s.sample_rate_hz);
  s.n_channels = j.value("n_channels", s.n_channels);
  s.trial_seconds = j.value("trial_seconds", s.trial_seconds);
  s.band_low_hz = j.value("band_low_hz", s.band_low_hz);
  s.band_high_hz = j.value("band_high_hz", s.band_high_hz);
  return s;
}

/// Blob file written next to a manifest: "<stem>.bin".
inline std::filesystem::path blob_path_for(const std::filesystem::path& manifest) {
  auto p = manifest;
  p.replace_extension(".bin");
  return p;
}

/// Writes `<path>` (JSON manifest) and `<stem>.bin` (float32 LE samples, channel-major per trial).
/// `config_hash`, when non-empty, is recorded in the manifest.
inline void save_dataset(const Dataset& ds, const std::filesystem::path& path, const std::string& config_hash = {}) {
  validate_dataset(ds);
  const auto blob = blob_path_for(path);
  std::vector<unsigned char> bytes;
  Json trials = Json::array();
  for (const auto& t : ds.trials) {
    const std::size_t offset = bytes.size();
    io::append_f32le(bytes, t.samples);
    trials.push_back({{"trial_id", t.trial_id},
                      {"class_label", t.class_label},
                      {"domain_label", to_string(t.domain)},
                      {"blob_file", blob.filename().string()},
                      {"byte_offset", offset},
                      {"byte_length", bytes.size() - offset}});
  }
  Json manifest = {{"format", "eegintent-dataset"},
                   {"version", 1},
                   {"spec", to_json(ds.spec)},
                   {"channel_names", ds.channel_names},
                   {"trial_count", ds.trials.size()},
                   {"trials", trials}};
  if (!config_hash.empty()) manifest["config_hash"] = config_hash;
  io::write_file(blob, bytes);
  io::write_text(path, manifest.dump(2) + "\n");
}

inline Dataset load_dataset(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingFile, path.string());
  Json manifest;
  try {
    manifest = Json::parse(io::read_text(path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedManifest, e.what());
  }

  Dataset ds;
  std::map<std::string, std::vector<unsigned char>> blobs;
  const auto dir = path.parent_path();
  std::optional<std::uint64_t> current_id;
  try {
    ds.spec = acquisition_from_json(manifest.at("spec"));
    ds.spec.validate();
    ds.channel_names = manifest.at("channel_names").get<std::vector<std::string>>();
    const std::size_t expected = ds.spec.n_channels * ds.spec.n_samples() * 4;
    for (const auto& jt : manifest.at("trials")) {
      TrialRecord t;
      t.trial_id = jt.at("trial_id").get<std::uint64_t>();
      current_id = t.trial_id;
      t.class_label = jt.at("class_label").get<int>();
      t.domain = parse_domain(jt.at("domain_label").get<std::string>());
      const auto blob_name = jt.at("blob_file").get<std::string>();
      const auto offset = jt.at("byte_offset").get<std::size_t>();
      const auto length = jt.at("byte_length").get<std::size_t>();
      if (length != expected)
        throw Error(ErrorCode::DimensionMismatch,
                    "blob holds " + std::to_string(length / 4) + " values, expected " +
                        std::to_string(ds.spec.n_channels) + "x" + std::to_string(ds.spec.n_samples()),
                    t.trial_id);
      auto it = blobs.find(blob_name);
      if (it == blobs.end()) {
        const auto blob_path = dir / blob_name;
        if (!std::filesystem::exists(blob_path))
          throw Error(ErrorCode::MissingFile, blob_path.string(), t.trial_id);
        it = blobs.emplace(blob_name, io::read_file(blob_path)).first;
      }
      if (offset > it->second.size() || length > it->second.size() - offset)
        throw Error(ErrorCode::MalformedManifest, "byte range outside " + blob_name, t.trial_id);
      t.n_channels = ds.spec.n_channels;
      t.n_samples = ds.spec.n_samples();
      t.samples = io::decode_f32le(std::span(it->second).subspan(offset, length));
      validate_trial(t, ds.spec);
      ds.trials.push_back(std::move(t));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedManifest, e.what(), current_id);
  }
  validate_dataset(ds);
  return ds;
}

}  // namespace eegintent
