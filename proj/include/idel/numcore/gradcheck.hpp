// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "idel/numcore/tensor.hpp"

namespace idel::num {

struct GradCheckReport {
  // Per parameter: ||analytic - numeric|| / max(||analytic||, ||numeric||),
  // or the absolute difference norm when both norms fall below `abs_floor`.
  std::vector<double> rel_errors;
  double max_rel_error = 0.0;
  std::size_t worst_param = 0;
};

/// Compares reverse-mode gradients of `loss_fn` against central finite
/// differences with step `h`. `loss_fn` must rebuild its graph on every call
/// and be deterministic. Parameter gradients are zeroed on entry and left
/// holding the analytic values on exit.
GradCheckReport gradcheck(const std::function<Tensor()>& loss_fn, std::span<Tensor> params, double h = 1e-5,
                          double abs_floor = 1e-10);

}  // namespace idel::num
