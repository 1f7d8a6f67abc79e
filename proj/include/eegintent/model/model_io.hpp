#pragma once

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eegintent/model/config.hpp"
#include "eegintent/model/network.hpp"
#include "eegintent/util/binary_io.hpp"

namespace eegintent::model {

inline nlohmann::json to_json(const ModelConfig& c) {
  return {{"input_dim", c.input_dim},
          {"encoder_dims", c.encoder_dims},
          {"class_head_dims", c.class_head_dims},
          {"domain_head_dims", c.domain_head_dims},
          {"suppression_gain", c.suppression_gain},
          {"lambda1", c.lambda1},
          {"lambda2", c.lambda2},
          {"mmd_bandwidth_mode", c.mmd_bandwidth_mode == BandwidthMode::Median ? "median" : "fixed"},
          {"mmd_bandwidth", c.mmd_bandwidth},
          {"learning_rate", c.learning_rate},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"weight_init_scale", c.weight_init_scale},
          {"standardize", c.standardize},
          {"seed", c.seed}};
}

/// Missing keys keep their defaults.
inline ModelConfig model_config_from_json(const nlohmann::json& j, ModelConfig c = {}) {
  c.input_dim = j.value("input_dim", c.input_dim);
  c.encoder_dims = j.value("encoder_dims", c.encoder_dims);
  c.class_head_dims = j.value("class_head_dims", c.class_head_dims);
  c.domain_head_dims = j.value("domain_head_dims", c.domain_head_dims);
  c.suppression_gain = j.value("suppression_gain", c.suppression_gain);
  c.lambda1 = j.value("lambda1", c.lambda1);
  c.lambda2 = j.value("lambda2", c.lambda2);
  if (j.contains("mmd_bandwidth_mode")) {
    const auto m = j.at("mmd_bandwidth_mode").get<std::string>();
    if (m != "median" && m != "fixed") throw Error(ErrorCode::InvalidConfig, "mmd_bandwidth_mode: " + m);
    c.mmd_bandwidth_mode = m == "median" ? BandwidthMode::Median : BandwidthMode::Fixed;
  }
  c.mmd_bandwidth = j.value("mmd_bandwidth", c.mmd_bandwidth);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.weight_init_scale = j.value("weight_init_scale", c.weight_init_scale);
  c.standardize = j.value("standardize", c.standardize);
  c.seed = j.value("seed", c.seed);
  return c;
}

/// Header `path` (JSON) plus `<stem>.bin`: float32 LE scaler mean, scaler inv_std, mask,
/// then each layer's weight (row-major) followed by its bias, in encoder, class head,
/// domain head order.
template <typename S>
void save_model(const ModelParams<S>& params, const ModelConfig& config, Mode mode, const std::filesystem::path& path,
                const std::string& config_hash = {}) {
  auto blob = path;
  blob.replace_extension(".bin");
  std::vector<float> values;
  auto push_vec = [&](const Vec<S>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) values.push_back(static_cast<float>(v[i]));
  };
  push_vec(params.scaler.mean);
  push_vec(params.scaler.inv_std);
  push_vec(params.mask);
  nlohmann::json layers = nlohmann::json::array();
  auto push_group = [&](const char* name, const std::vector<Layer<S>>& group) {
    for (const auto& l : group) {
      layers.push_back({{"group", name}, {"rows", l.weight.rows()}, {"cols", l.weight.cols()}});
      for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
        for (Eigen::Index c = 0; c < l.weight.cols(); ++c) values.push_back(static_cast<float>(l.weight(r, c)));
      push_vec(l.bias);
    }
  };
  push_group("encoder", params.weights.encoder);
  push_group("class_head", params.weights.class_head);
  push_group("domain_head", params.weights.domain_head);

  nlohmann::json header = {{"format", "eegintent-model"},
                           {"version", 1},
                           {"mode", to_string(mode)},
                           {"config", to_json(config)},
                           {"input_dim", params.input_dim()},
                           {"layers", layers},
                           {"blob_file", blob.filename().string()},
                           {"value_count", values.size()}};
  if (!config_hash.empty()) header["config_hash"] = config_hash;
  std::vector<unsigned char> bytes;
  io::append_f32le(bytes, values);
  io::write_file(blob, bytes);
  io::write_text(path, header.dump(2) + "\n");
}

template <typename S>
struct LoadedModel {
  ModelParams<S> params;
  ModelConfig config;
  Mode mode = Mode::Multitask;
};

template <typename S = double>
LoadedModel<S> load_model(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingFile, path.string());
  LoadedModel<S> out;
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(io::read_text(path));
    out.mode = parse_mode(header.at("mode").get<std::string>());
    out.config = model_config_from_json(header.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedManifest, e.what());
  }
  const auto values = io::decode_f32le(io::read_file(path.parent_path() / header.at("blob_file").get<std::string>()));
  const auto dim = header.at("input_dim").get<Eigen::Index>();
  std::size_t pos = 0;
  auto take_vec = [&](Eigen::Index n) {
    if (pos + static_cast<std::size_t>(n) > values.size())
      throw Error(ErrorCode::DimensionMismatch, "model blob shorter than its header describes");
    Vec<S> v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = static_cast<S>(values[pos++]);
    return v;
  };
  out.params.scaler.mean = take_vec(dim);
  out.params.scaler.inv_std = take_vec(dim);
  out.params.mask = take_vec(dim);
  for (const auto& jl : header.at("layers")) {
    const auto rows = jl.at("rows").get<Eigen::Index>();
    const auto cols = jl.at("cols").get<Eigen::Index>();
    const auto flat = take_vec(rows * cols);
    Layer<S> l{Mat<S>(rows, cols), take_vec(rows)};
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) l.weight(r, c) = flat[r * cols + c];
    const auto group = jl.at("group").get<std::string>();
    if (group == "encoder") out.params.weights.encoder.push_back(std::move(l));
    else if (group == "class_head") out.params.weights.class_head.push_back(std::move(l));
    else if (group == "domain_head") out.params.weights.domain_head.push_back(std::move(l));
    else throw Error(ErrorCode::MalformedManifest, "unknown layer group " + group);
  }
  if (pos != values.size()) throw Error(ErrorCode::DimensionMismatch, "model blob longer than its header describes");
  return out;
}

inline std::string history_csv(const std::vector<LossBreakdown>& history) {
  std::ostringstream os;
  os << "epoch,l_class,l_domain,l_mmd,l_total\n";
  char buf[160];
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& h = history[i];
    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9g\n", i + 1, h.l_class, h.l_domain, h.l_mmd, h.l_total);
    os << buf;
  }
  return os.str();
}

}  // namespace eegintent::model
