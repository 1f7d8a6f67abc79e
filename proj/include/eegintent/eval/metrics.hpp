#pragma once

#include <array>
#include <span>
#include <vector>

#include "eegintent/core/dataset.hpp"
#include "eegintent/model/network.hpp"
#include "eegintent/spectral/features.hpp"

namespace eegintent::eval {

/// Argmax with ties resolved to the lowest index.
template <typename S>
int argmax(std::span<const S> logits) {
  int best = 0;
  for (std::size_t i = 1; i < logits.size(); ++i)
    if (logits[i] > logits[best]) best = static_cast<int>(i);
  return best;
}

template <typename S>
int predict(const model::ModelParams<S>& params, std::span<const S> features) {
  const auto r = model::forward(params, features);
  return argmax<S>(std::span<const S>(r.class_logits.data(), static_cast<std::size_t>(r.class_logits.size())));
}

struct F1Summary {
  std::vector<double> per_class;  // fractions in [0,1]
  double macro = 0.0;
  std::vector<int> absent;  // classes with no true instance in the subset (F1 counted as 0)
};

/// Per-class F1 and their unweighted mean over `n_classes`.
inline F1Summary macro_f1(std::span<const int> truth, std::span<const int> pred, int n_classes) {
  std::vector<int> tp(n_classes), fp(n_classes), fn(n_classes), support(n_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++support[truth[i]];
    if (truth[i] == pred[i]) {
      ++tp[truth[i]];
    } else {
      ++fp[pred[i]];
      ++fn[truth[i]];
    }
  }
  F1Summary out;
  for (int c = 0; c < n_classes; ++c) {
    const int denom = 2 * tp[c] + fp[c] + fn[c];
    out.per_class.push_back(denom == 0 ? 0.0 : 2.0 * tp[c] / denom);
    if (support[c] == 0) out.absent.push_back(c);
    out.macro += out.per_class.back();
  }
  out.macro /= n_classes;
  return out;
}

/// Accuracy and macro-F1 (overall and per domain), as percentages in [0,100].
struct EvalReport {
  double accuracy = 0.0;
  double f1_all = 0.0;
  double f1_correct = 0.0;
  double f1_misarticulated = 0.0;
  std::array<std::array<int, kNumClasses>, kNumClasses> confusion{};  // [truth][pred]
  int n_test = 0;
  int n_correct_trials = 0;
  int n_misarticulated_trials = 0;
  std::vector<int> absent_correct;
  std::vector<int> absent_misarticulated;
};

/// Metrics from labelled predictions.
inline EvalReport score(std::span<const int> truth, std::span<const int> pred, std::span<const Domain> domains) {
  if (truth.empty()) throw Error(ErrorCode::EmptyTestSet, "no test trials");
  if (truth.size() != pred.size() || truth.size() != domains.size())
    throw Error(ErrorCode::ShapeMismatch, "truth/prediction/domain lengths differ");
  EvalReport r;
  r.n_test = static_cast<int>(truth.size());
  std::array<std::vector<int>, kNumDomains> sub_truth, sub_pred;
  int hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++r.confusion[truth[i]][pred[i]];
    hits += truth[i] == pred[i];
    const auto d = static_cast<std::size_t>(domains[i]);
    sub_truth[d].push_back(truth[i]);
    sub_pred[d].push_back(pred[i]);
  }
  r.accuracy = 100.0 * hits / r.n_test;
  r.f1_all = 100.0 * macro_f1(truth, pred, kNumClasses).macro;
  const auto fc = macro_f1(sub_truth[0], sub_pred[0], kNumClasses);
  const auto fm = macro_f1(sub_truth[1], sub_pred[1], kNumClasses);
  r.f1_correct = 100.0 * fc.macro;
  r.f1_misarticulated = 100.0 * fm.macro;
  r.absent_correct = fc.absent;
  r.absent_misarticulated = fm.absent;
  r.n_correct_trials = static_cast<int>(sub_truth[0].size());
  r.n_misarticulated_trials = static_cast<int>(sub_truth[1].size());
  return r;
}

template <typename S>
EvalReport evaluate(const model::ModelParams<S>& params, const spectral::FeatureSet& test) {
  if (test.size() == 0) throw Error(ErrorCode::EmptyTestSet, "no test trials");
  if (test.row_size() != params.input_dim())
    throw Error(ErrorCode::ShapeMismatch, "feature C*F " + std::to_string(test.row_size()) + " != model input_dim " +
                                              std::to_string(params.input_dim()));
  std::vector<int> truth, pred;
  std::vector<Domain> domains;
  std::vector<S> row(test.row_size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto r = test.row(i);
    std::copy(r.begin(), r.end(), row.begin());
    pred.push_back(predict<S>(params, row));
    truth.push_back(test.trials[i].class_label);
    domains.push_back(test.trials[i].domain);
  }
  return score(truth, pred, domains);
}

}  // namespace eegintent::eval
