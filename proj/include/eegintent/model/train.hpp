#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "eegintent/model/loss.hpp"
#include "eegintent/spectral/features.hpp"

namespace eegintent::model {

template <typename S>
struct TrainResult {
  ModelParams<S> params;
  std::vector<LossBreakdown> history;  // one entry per epoch, batch means
};

/// Feature rows as columns of a (row_size x N) matrix.
template <typename S>
Mat<S> feature_matrix(const spectral::FeatureSet& fs) {
  Mat<S> x(static_cast<Eigen::Index>(fs.row_size()), static_cast<Eigen::Index>(fs.size()));
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto r = fs.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) x(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = r[k];
  }
  return x;
}

/// Population mean/std per feature; features with std below 1e-6 are only centred.
template <typename S>
Standardizer<S> fit_standardizer(const Mat<S>& x) {
  Standardizer<S> s{Vec<S>::Zero(x.rows()), Vec<S>::Ones(x.rows())};
  if (x.cols() == 0) return s;
  s.mean = x.rowwise().mean();
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const S var = (x.row(r).array() - s.mean[r]).square().mean();
    const S sd = std::sqrt(var);
    s.inv_std[r] = sd > S(1e-6) ? S(1) / sd : S(1);
  }
  return s;
}

/// Resolves input_dim against the feature set; throws ShapeMismatch on disagreement.
inline ModelConfig bind_input_dim(ModelConfig config, const spectral::FeatureSet& fs) {
  if (config.input_dim == 0) config.input_dim = fs.row_size();
  if (config.input_dim != fs.row_size())
    throw Error(ErrorCode::ShapeMismatch, "model input_dim " + std::to_string(config.input_dim) +
                                              " != feature C*F " + std::to_string(fs.row_size()));
  return config;
}

/// Mini-batch gradient descent at a fixed learning rate. The epoch order is a
/// Fisher-Yates shuffle drawn from the model seed, so runs are reproducible bit for bit.
template <typename S = double>
TrainResult<S> train(const spectral::FeatureSet& data, const ModelConfig& base_config, Mode mode) {
  if (data.size() == 0) throw Error(ErrorCode::EmptyGroup, "no training trials");
  const ModelConfig config = bind_input_dim(base_config, data).for_mode(mode);
  config.validate();

  const auto mask = band_mask(data.bin_freqs_hz, data.n_channels(), config.suppression_gain);
  TrainResult<S> result{init_params<S>(config, mask), {}};
  const Mat<S> x = feature_matrix<S>(data);
  if (config.standardize) result.params.scaler = fit_standardizer<S>(x);

  const std::size_t n = data.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng(derive_seed(config.seed, 1));
  const auto batch_size = static_cast<std::size_t>(config.batch_size);

  Batch<S> batch;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[static_cast<std::size_t>(shuffle_rng() % (i + 1))]);

    LossBreakdown sum;
    std::size_t n_batches = 0;
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t end = std::min(n, start + batch_size);
      batch.x.resize(x.rows(), static_cast<Eigen::Index>(end - start));
      batch.classes.clear();
      batch.domains.clear();
      for (std::size_t j = start; j < end; ++j) {
        batch.x.col(static_cast<Eigen::Index>(j - start)) = x.col(static_cast<Eigen::Index>(order[j]));
        batch.classes.push_back(data.trials[order[j]].class_label);
        batch.domains.push_back(data.trials[order[j]].domain);
      }
      auto g = backward(result.params, batch, config);
      if (!std::isfinite(g.loss.l_total))
        throw Error(ErrorCode::NonFiniteLoss, "epoch " + std::to_string(epoch + 1));
      apply_step(result.params.weights, g.grad, config.learning_rate);
      sum.l_class += g.loss.l_class;
      sum.l_domain += g.loss.l_domain;
      sum.l_mmd += g.loss.l_mmd;
      sum.single_domain_batch = sum.single_domain_batch || g.loss.single_domain_batch;
      ++n_batches;
    }
    LossBreakdown epoch_loss;
    epoch_loss.l_class = sum.l_class / static_cast<double>(n_batches);
    epoch_loss.l_domain = sum.l_domain / static_cast<double>(n_batches);
    epoch_loss.l_mmd = sum.l_mmd / static_cast<double>(n_batches);
    epoch_loss.l_total =
        combine_losses(epoch_loss.l_class, epoch_loss.l_domain, epoch_loss.l_mmd, config.lambda1, config.lambda2);
    epoch_loss.single_domain_batch = sum.single_domain_batch;
    result.history.push_back(epoch_loss);
  }
  return result;
}

}  // namespace eegintent::model
