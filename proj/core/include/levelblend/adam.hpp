#pragma once

#include <cstdint>
#include <vector>

#include "levelblend/autodiff.hpp"

namespace levelblend::ad {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Divide by the running maximum of v instead of v itself.
  bool amsgrad = false;
};

/// First and second moments per parameter, in ParameterStore order.
struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  /// Running maximum of v; empty unless config.amsgrad.
  std::vector<Matrix> v_max;

  /// Zeroed moments shaped like the store's parameters.
  static AdamState for_store(const ParameterStore& store, AdamConfig config = {});
};

/// Bias-corrected Adam update of every parameter from its accumulated gradient:
///   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
///   p <- p - lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
/// With amsgrad the denominator uses v_max <- max(v_max, v).
/// Throws on a moment/parameter shape mismatch.
void adam_step(ParameterStore& store, AdamState& state, double learning_rate);

}  // namespace levelblend::ad
