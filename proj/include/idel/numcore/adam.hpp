// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "idel/numcore/tensor.hpp"

namespace idel::num {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::size_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  AdamConfig config;
};

/// Bias-corrected Adam over a fixed parameter list. Minimizes; callers that
/// maximize an objective step on its negation.
class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamConfig config = {});

  /// Applies one update from the current gradients, then zeroes them.
  /// Throws ContractError when a parameter has no gradient record.
  void step();
  /// Allocates (if needed) and zeroes every parameter gradient.
  void zero_grad();

  const AdamState& state() const { return state_; }
  const std::vector<Tensor>& params() const { return params_; }
  void set_lr(double lr);

 private:
  std::vector<Tensor> params_;
  AdamState state_;
};

}  // namespace idel::num
