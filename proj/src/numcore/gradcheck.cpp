// SPDX-License-Identifier: Apache-2.0
#include "idel/numcore/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "idel/errors.hpp"

namespace idel::num {

GradCheckReport gradcheck(const std::function<Tensor()>& loss_fn, std::span<Tensor> params, double h,
                          double abs_floor) {
  for (auto& p : params) p.zero_grad();
  loss_fn().backward();

  GradCheckReport report;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    std::vector<double> analytic(p.grad().begin(), p.grad().end());
    auto w = p.mutable_data();
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double orig = w[j];
      w[j] = orig + h;
      const double up = loss_fn().item();
      w[j] = orig - h;
      const double down = loss_fn().item();
      w[j] = orig;
      const double numeric = (up - down) / (2.0 * h);
      if (!std::isfinite(numeric)) throw DomainError("gradcheck: non-finite finite difference");
      diff2 += (analytic[j] - numeric) * (analytic[j] - numeric);
      a2 += analytic[j] * analytic[j];
      n2 += numeric * numeric;
    }
    const double denom = std::max(std::sqrt(a2), std::sqrt(n2));
    const double err = denom < abs_floor ? std::sqrt(diff2) : std::sqrt(diff2) / denom;
    report.rel_errors.push_back(err);
    if (err >= report.max_rel_error) {
      report.max_rel_error = err;
      report.worst_param = i;
    }
  }
  return report;
}

}  // namespace idel::num
