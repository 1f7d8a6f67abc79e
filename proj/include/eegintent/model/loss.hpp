#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "eegintent/core/dataset.hpp"
#include "eegintent/model/mmd.hpp"
#include "eegintent/model/network.hpp"

namespace eegintent::model {

/// Raw feature columns (input_dim x B) with their labels.
template <typename S>
struct Batch {
  Mat<S> x;
  std::vector<int> classes;
  std::vector<Domain> domains;

  Eigen::Index size() const { return x.cols(); }
};

/// l_class + lambda1 l_domain + lambda2 l_mmd.
inline double combine_losses(double l_class, double l_domain, double l_mmd, double lambda1, double lambda2) {
  return l_class + lambda1 * l_domain + lambda2 * l_mmd;
}

/// Mean softmax cross-entropy over columns; optionally writes (softmax - onehot) / B into `grad`.
template <typename S>
S softmax_cross_entropy(const Mat<S>& logits, const std::vector<int>& labels, Mat<S>* grad = nullptr) {
  const Eigen::Index b = logits.cols();
  S total = 0;
  if (grad) grad->resize(logits.rows(), b);
  for (Eigen::Index j = 0; j < b; ++j) {
    const S mx = logits.col(j).maxCoeff();
    const Vec<S> e = (logits.col(j).array() - mx).exp().matrix();
    const S sum = e.sum();
    total += std::log(sum) + mx - logits(labels[j], j);
    if (grad) {
      grad->col(j) = e / sum;
      (*grad)(labels[j], j) -= S(1);
    }
  }
  if (grad) *grad /= static_cast<S>(b);
  return total / static_cast<S>(b);
}

namespace detail {

template <typename S>
LossBreakdown objective(const ModelParams<S>& params, const Batch<S>& batch, const ModelConfig& config,
                        std::optional<double> bandwidth, Weights<S>* grads) {
  const Eigen::Index b = batch.size();
  if (b == 0) throw Error(ErrorCode::EmptyGroup, "empty batch");
  if (static_cast<std::size_t>(b) != batch.classes.size() || static_cast<std::size_t>(b) != batch.domains.size())
    throw Error(ErrorCode::ShapeMismatch, "batch labels differ in length from features");

  const Mat<S> x = standardize(params, batch.x);
  const Mat<S> xc = params.mask.asDiagonal() * x;
  const auto& w = params.weights;
  if (grads) *grads = w.zeros_like();

  LossBreakdown loss;
  StackCache<S> enc_c, head_c;
  const Mat<S> emb_c = forward_stack(w.encoder, xc, true, grads ? &enc_c : nullptr);
  const Mat<S> logits_c = forward_stack(w.class_head, emb_c, false, grads ? &head_c : nullptr);
  Mat<S> d_logits_c;
  loss.l_class = static_cast<double>(softmax_cross_entropy(logits_c, batch.classes, grads ? &d_logits_c : nullptr));
  if (grads) {
    Mat<S> d_emb = backward_stack(w.class_head, head_c, d_logits_c, false, grads->class_head);
    backward_stack(w.encoder, enc_c, std::move(d_emb), true, grads->encoder, false);
  }

  const bool domain_branch = config.lambda1 > 0.0 || config.lambda2 > 0.0;
  if (domain_branch) {
    StackCache<S> enc_d, head_d;
    const Mat<S> emb_d = forward_stack(w.encoder, x, true, grads ? &enc_d : nullptr);
    const Mat<S> logits_d = forward_stack(w.domain_head, emb_d, false, grads ? &head_d : nullptr);
    std::vector<int> dom(b);
    std::size_t n_mis = 0;
    for (Eigen::Index j = 0; j < b; ++j) {
      dom[j] = static_cast<int>(batch.domains[j]);
      n_mis += dom[j];
    }
    Mat<S> d_logits_d;
    loss.l_domain = static_cast<double>(softmax_cross_entropy(logits_d, dom, grads ? &d_logits_d : nullptr));
    Mat<S> d_emb_d = Mat<S>::Zero(emb_d.rows(), b);
    if (grads && config.lambda1 > 0.0)
      d_emb_d = backward_stack<S>(w.domain_head, head_d, Mat<S>(d_logits_d * static_cast<S>(config.lambda1)), false,
                               grads->domain_head);

    const bool both_domains = n_mis > 0 && n_mis < static_cast<std::size_t>(b);
    loss.single_domain_batch = !both_domains;
    if (both_domains && config.lambda2 > 0.0) {
      double sigma = config.mmd_bandwidth;
      if (bandwidth) {
        sigma = *bandwidth;
      } else if (config.mmd_bandwidth_mode == BandwidthMode::Median) {
        try {
          sigma = static_cast<double>(median_heuristic(emb_d));
        } catch (const Error&) {
          sigma = config.mmd_bandwidth;
        }
      }
      loss.bandwidth = sigma;
      Mat<S> d_mmd;
      loss.l_mmd = static_cast<double>(mmd_rbf_with_grad(emb_d, dom, static_cast<S>(sigma), d_mmd));
      if (grads) d_emb_d += d_mmd * static_cast<S>(config.lambda2);
    }
    if (grads) backward_stack(w.encoder, enc_d, std::move(d_emb_d), true, grads->encoder, false);
  }
  loss.l_total = combine_losses(loss.l_class, loss.l_domain, loss.l_mmd, config.lambda1, config.lambda2);
  return loss;
}

}  // namespace detail

/// Objective on one batch. l_mmd uses the unmasked (domain-branch) embeddings grouped by
/// domain; a batch holding a single domain gets l_mmd = 0 and `single_domain_batch` set.
/// When lambda1 = lambda2 = 0 the domain branch is not evaluated.
/// `bandwidth` overrides the configured kernel bandwidth rule.
template <typename S>
LossBreakdown compute_loss(const ModelParams<S>& params, const Batch<S>& batch, const ModelConfig& config,
                           std::optional<double> bandwidth = std::nullopt) {
  return detail::objective<S>(params, batch, config, bandwidth, nullptr);
}

template <typename S>
struct GradientResult {
  Weights<S> grad;
  LossBreakdown loss;
};

/// Exact gradient of l_total for every weight and bias. The kernel bandwidth is held
/// constant (no gradient flows through the median heuristic).
template <typename S>
GradientResult<S> backward(const ModelParams<S>& params, const Batch<S>& batch, const ModelConfig& config,
                           std::optional<double> bandwidth = std::nullopt) {
  GradientResult<S> r;
  r.loss = detail::objective<S>(params, batch, config, bandwidth, &r.grad);
  return r;
}

/// params -= learning_rate * grad
template <typename S>
void apply_step(Weights<S>& params, const Weights<S>& grad, double learning_rate) {
  auto step = [&](auto& groups_p, const auto& groups_g) {
    for (std::size_t i = 0; i < groups_p.size(); ++i) {
      groups_p[i].weight -= static_cast<S>(learning_rate) * groups_g[i].weight;
      groups_p[i].bias -= static_cast<S>(learning_rate) * groups_g[i].bias;
    }
  };
  step(params.encoder, grad.encoder);
  step(params.class_head, grad.class_head);
  step(params.domain_head, grad.domain_head);
}

}  // namespace eegintent::model
