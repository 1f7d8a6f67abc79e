#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eegintent/model/config.hpp"
#include "eegintent/spectral/bands.hpp"
#include "eegintent/util/rng.hpp"

namespace eegintent::model {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// Fully connected layer, y = W x + b with W shaped (out x in).
template <typename S>
struct Layer {
  Mat<S> weight;
  Vec<S> bias;

  bool operator==(const Layer& o) const { return weight == o.weight && bias == o.bias; }
};

/// Trainable weights. Also used as the gradient container.
template <typename S>
struct Weights {
  std::vector<Layer<S>> encoder;
  std::vector<Layer<S>> class_head;
  std::vector<Layer<S>> domain_head;

  template <typename F>
  void for_each_layer(F&& f) {
    for (auto* group : {&encoder, &class_head, &domain_head})
      for (auto& l : *group) f(l);
  }
  template <typename F>
  void for_each_layer(F&& f) const {
    for (const auto* group : {&encoder, &class_head, &domain_head})
      for (const auto& l : *group) f(l);
  }

  Weights zeros_like() const {
    Weights z = *this;
    z.for_each_layer([](Layer<S>& l) {
      l.weight.setZero();
      l.bias.setZero();
    });
    return z;
  }

  bool operator==(const Weights&) const = default;
};

/// Per-feature z-scoring fitted on training data; identity by default.
template <typename S>
struct Standardizer {
  Vec<S> mean;
  Vec<S> inv_std;

  static Standardizer identity(std::size_t dim) { return {Vec<S>::Zero(dim), Vec<S>::Ones(dim)}; }

  bool operator==(const Standardizer& o) const { return mean == o.mean && inv_std == o.inv_std; }
};

/// Per-bin gains for the class view: `gain` on delta/alpha/gamma bins, 1 elsewhere,
/// repeated for every channel (feature index = channel * F + bin).
inline std::vector<double> band_mask(std::span<const double> bin_freqs, std::size_t n_channels, double gain,
                                     const spectral::BandTable& bands = spectral::default_bands()) {
  const auto& delta = spectral::find_band(bands, "delta");
  const auto& alpha = spectral::find_band(bands, "alpha");
  const auto& gamma = spectral::find_band(bands, "gamma");
  std::vector<double> per_bin(bin_freqs.size(), 1.0);
  for (std::size_t k = 0; k < bin_freqs.size(); ++k) {
    const double f = bin_freqs[k];
    if (delta.contains(f) || alpha.contains(f) || gamma.contains(f)) per_bin[k] = gain;
  }
  std::vector<double> mask;
  mask.reserve(per_bin.size() * n_channels);
  for (std::size_t ch = 0; ch < n_channels; ++ch) mask.insert(mask.end(), per_bin.begin(), per_bin.end());
  return mask;
}

template <typename S>
struct ModelParams {
  Weights<S> weights;
  Vec<S> mask;
  Standardizer<S> scaler;

  std::size_t input_dim() const { return static_cast<std::size_t>(mask.size()); }
  bool operator==(const ModelParams& o) const { return weights == o.weights && mask == o.mask && scaler == o.scaler; }
};

namespace detail {

template <typename S>
std::vector<Layer<S>> init_stack(std::size_t in, const std::vector<std::size_t>& dims, double scale, Rng& rng) {
  std::vector<Layer<S>> layers;
  for (auto out : dims) {
    std::normal_distribution<double> normal(0.0, scale / std::sqrt(static_cast<double>(in)));
    Layer<S> l{Mat<S>(out, in), Vec<S>::Zero(out)};
    // Row-major fill so the draw order is layout independent.
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = static_cast<S>(normal(rng));
    layers.push_back(std::move(l));
    in = out;
  }
  return layers;
}

}  // namespace detail

/// Fan-in scaled normal weights (sd = weight_init_scale / sqrt(fan_in)), zero biases.
/// `mask` must have input_dim entries; pass an empty span for an all-ones mask.
template <typename S = double>
ModelParams<S> init_params(const ModelConfig& config, std::span<const double> mask = {}) {
  config.validate();
  if (!mask.empty() && mask.size() != config.input_dim)
    throw Error(ErrorCode::ShapeMismatch, "mask length differs from input_dim");
  Rng rng(derive_seed(config.seed, 0));
  ModelParams<S> p;
  p.weights.encoder = detail::init_stack<S>(config.input_dim, config.encoder_dims, config.weight_init_scale, rng);
  const std::size_t embed = config.encoder_dims.back();
  p.weights.class_head = detail::init_stack<S>(embed, config.class_head_dims, config.weight_init_scale, rng);
  p.weights.domain_head = detail::init_stack<S>(embed, config.domain_head_dims, config.weight_init_scale, rng);
  p.mask = Vec<S>::Ones(config.input_dim);
  for (std::size_t i = 0; i < mask.size(); ++i) p.mask[i] = static_cast<S>(mask[i]);
  p.scaler = Standardizer<S>::identity(config.input_dim);
  return p;
}

/// Activations of a layer stack for a column batch. acts[0] is the input.
template <typename S>
struct StackCache {
  std::vector<Mat<S>> acts;
};

template <typename S>
Mat<S> forward_stack(const std::vector<Layer<S>>& layers, const Mat<S>& input, bool relu_last,
                     StackCache<S>* cache = nullptr) {
  Mat<S> a = input;
  if (cache) cache->acts = {input};
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Mat<S> z = layers[i].weight * a;
    z.colwise() += layers[i].bias;
    if (i + 1 < layers.size() || relu_last) z = z.cwiseMax(S(0));
    a = std::move(z);
    if (cache) cache->acts.push_back(a);
  }
  return a;
}

/// Backpropagates `grad_out` (d loss / d stack output) through a cached stack, adding
/// parameter gradients into `grads`. Returns d loss / d input unless `need_input_grad` is false.
template <typename S>
Mat<S> backward_stack(const std::vector<Layer<S>>& layers, const StackCache<S>& cache, Mat<S> grad_out,
                      bool relu_last, std::vector<Layer<S>>& grads, bool need_input_grad = true) {
  for (std::size_t i = layers.size(); i-- > 0;) {
    const Mat<S>& out = cache.acts[i + 1];
    if (i + 1 < layers.size() || relu_last) grad_out = grad_out.cwiseProduct((out.array() > S(0)).template cast<S>().matrix());
    grads[i].weight.noalias() += grad_out * cache.acts[i].transpose();
    grads[i].bias += grad_out.rowwise().sum();
    if (i > 0 || need_input_grad) grad_out = layers[i].weight.transpose() * grad_out;
  }
  return grad_out;
}

template <typename S>
struct ForwardResult {
  Vec<S> class_logits;
  Vec<S> domain_logits;
  Vec<S> embedding_class;
  Vec<S> embedding_domain;
};

/// Standardized (but unmasked) input columns for a raw feature batch.
template <typename S>
Mat<S> standardize(const ModelParams<S>& params, const Mat<S>& raw) {
  if (static_cast<std::size_t>(raw.rows()) != params.input_dim())
    throw Error(ErrorCode::ShapeMismatch, "feature length " + std::to_string(raw.rows()) + " != input_dim " +
                                              std::to_string(params.input_dim()));
  Mat<S> x = raw;
  x.colwise() -= params.scaler.mean;
  return params.scaler.inv_std.asDiagonal() * x;
}

/// Runs both views: the domain branch sees the standardized input, the class branch
/// the same input times the band mask, through the same encoder.
template <typename S>
ForwardResult<S> forward(const ModelParams<S>& params, std::span<const S> features) {
  Mat<S> raw = Eigen::Map<const Vec<S>>(features.data(), static_cast<Eigen::Index>(features.size()));
  const Mat<S> x = standardize(params, raw);
  const Mat<S> xc = params.mask.asDiagonal() * x;
  ForwardResult<S> r;
  r.embedding_domain = forward_stack(params.weights.encoder, x, true);
  r.embedding_class = forward_stack(params.weights.encoder, xc, true);
  r.class_logits = forward_stack(params.weights.class_head, Mat<S>(r.embedding_class), false);
  r.domain_logits = forward_stack(params.weights.domain_head, Mat<S>(r.embedding_domain), false);
  return r;
}

template <typename S>
ForwardResult<S> forward(const ModelParams<S>& params, const std::vector<S>& features) {
  return forward(params, std::span<const S>(features));
}

}  // namespace eegintent::model
