#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "eegintent/error.hpp"

namespace eegintent::model {

enum class Mode { Baseline, Multitask };

constexpr std::string_view to_string(Mode m) { return m == Mode::Baseline ? "baseline" : "multitask"; }

inline Mode parse_mode(std::string_view s) {
  if (s == "baseline") return Mode::Baseline;
  if (s == "multitask") return Mode::Multitask;
  throw Error(ErrorCode::InvalidConfig, "mode must be baseline or multitask, got '" + std::string(s) + "'");
}

enum class BandwidthMode { Median, Fixed };

struct ModelConfig {
  std::size_t input_dim = 0;  // C x F; filled from the feature set when 0
  std::vector<std::size_t> encoder_dims{256, 64};
  std::vector<std::size_t> class_head_dims{32, 4};
  std::vector<std::size_t> domain_head_dims{32, 2};
  double suppression_gain = 0.2;
  double lambda1 = 0.3;
  double lambda2 = 0.3;
  BandwidthMode mmd_bandwidth_mode = BandwidthMode::Median;
  double mmd_bandwidth = 1.0;  // used when mode is Fixed, and as the fallback for degenerate batches
  double learning_rate = 0.05;
  int epochs = 300;
  int batch_size = 16;
  double weight_init_scale = 1.0;
  bool standardize = true;  // z-score inputs with training-set statistics
  std::uint64_t seed = 1;

  void validate() const {
    if (input_dim == 0) throw Error(ErrorCode::InvalidConfig, "input_dim must be positive");
    if (encoder_dims.empty()) throw Error(ErrorCode::InvalidConfig, "encoder needs at least one layer");
    if (class_head_dims.empty() || class_head_dims.back() != 4)
      throw Error(ErrorCode::InvalidConfig, "class head must end with 4 outputs");
    if (domain_head_dims.empty() || domain_head_dims.back() != 2)
      throw Error(ErrorCode::InvalidConfig, "domain head must end with 2 outputs");
    for (auto dims : {&encoder_dims, &class_head_dims, &domain_head_dims})
      for (auto d : *dims)
        if (d == 0) throw Error(ErrorCode::InvalidConfig, "layer widths must be positive");
    if (!(suppression_gain >= 0.0 && suppression_gain <= 1.0))
      throw Error(ErrorCode::InvalidConfig, "suppression_gain must lie in [0,1]");
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) throw Error(ErrorCode::InvalidConfig, "lambdas must be >= 0");
    if (!(mmd_bandwidth > 0.0)) throw Error(ErrorCode::InvalidConfig, "mmd_bandwidth must be positive");
    if (!(learning_rate >= 0.0)) throw Error(ErrorCode::InvalidConfig, "learning_rate must be >= 0");
    if (epochs < 0 || batch_size <= 0) throw Error(ErrorCode::InvalidConfig, "epochs >= 0 and batch_size > 0 required");
    if (!(weight_init_scale >= 0.0)) throw Error(ErrorCode::InvalidConfig, "weight_init_scale must be >= 0");
  }

  /// The settings a run in `mode` actually trains with: Baseline forces an identity mask
  /// and drops the domain and MMD terms.
  ModelConfig for_mode(Mode mode) const {
    ModelConfig c = *this;
    if (mode == Mode::Baseline) {
      c.suppression_gain = 1.0;
      c.lambda1 = 0.0;
      c.lambda2 = 0.0;
    }
    return c;
  }
};

/// One evaluation of the multitask objective.
struct LossBreakdown {
  double l_class = 0.0;
  double l_domain = 0.0;
  double l_mmd = 0.0;
  double l_total = 0.0;
  bool single_domain_batch = false;
  double bandwidth = 0.0;  // kernel bandwidth used for l_mmd (0 when not computed)
};

}  // namespace eegintent::model
