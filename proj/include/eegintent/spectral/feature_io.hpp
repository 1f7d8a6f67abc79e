#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "eegintent/spectral/features.hpp"
#include "eegintent/util/binary_io.hpp"

namespace eegintent::spectral {

/// Writes a JSON header at `path` and the float32 LE blob at `<stem>.bin`
/// (row-major [trial][channel][bin]).
inline void save_features(const FeatureSet& fs, const std::filesystem::path& path, const std::string& config_hash = {}) {
  auto blob = path;
  blob.replace_extension(".bin");
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : fs.trials)
    trials.push_back({{"trial_id", t.trial_id}, {"class_label", t.class_label}, {"domain_label", to_string(t.domain)}});
  nlohmann::json header = {{"format", "eegintent-features"},
                           {"version", 1},
                           {"C", fs.n_channels()},
                           {"F", fs.n_bins()},
                           {"channel_names", fs.channel_names},
                           {"bin_freqs", fs.bin_freqs_hz},
                           {"bin_width_hz", fs.bin_width_hz},
                           {"blob_file", blob.filename().string()},
                           {"trials", trials}};
  if (!config_hash.empty()) header["config_hash"] = config_hash;
  std::vector<unsigned char> bytes;
  io::append_f32le(bytes, fs.values);
  io::write_file(blob, bytes);
  io::write_text(path, header.dump(2) + "\n");
}

inline FeatureSet load_features(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingFile, path.string());
  FeatureSet fs;
  std::string blob_name;
  std::size_t c = 0, f = 0;
  try {
    const auto header = nlohmann::json::parse(io::read_text(path));
    c = header.at("C").get<std::size_t>();
    f = header.at("F").get<std::size_t>();
    fs.channel_names = header.at("channel_names").get<std::vector<std::string>>();
    fs.bin_freqs_hz = header.at("bin_freqs").get<std::vector<double>>();
    fs.bin_width_hz = header.at("bin_width_hz").get<double>();
    blob_name = header.at("blob_file").get<std::string>();
    for (const auto& jt : header.at("trials"))
      fs.trials.push_back({jt.at("trial_id").get<std::uint64_t>(), jt.at("class_label").get<int>(),
                           parse_domain(jt.at("domain_label").get<std::string>())});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedManifest, e.what());
  }
  if (fs.channel_names.size() != c || fs.bin_freqs_hz.size() != f)
    throw Error(ErrorCode::DimensionMismatch, "header C/F disagree with channel_names/bin_freqs");
  const auto bytes = io::read_file(path.parent_path() / blob_name);
  if (bytes.size() != fs.trials.size() * c * f * 4)
    throw Error(ErrorCode::DimensionMismatch, "feature blob size " + std::to_string(bytes.size()) + " bytes, expected " +
                                                  std::to_string(fs.trials.size() * c * f * 4));
  fs.values = io::decode_f32le(bytes);
  return fs;
}

}  // namespace eegintent::spectral
