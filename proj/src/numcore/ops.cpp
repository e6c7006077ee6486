// SPDX-License-Identifier: Apache-2.0
#include "idel/numcore/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "idel/errors.hpp"

namespace idel::num {

namespace {

using detail::Node;

enum class Broadcast { kSame, kScalar, kRows };

Broadcast broadcast_mode(const char* op, const Tensor& a, const Tensor& b) {
  const auto& sa = a.shape();
  const auto& sb = b.shape();
  if (sa == sb) return Broadcast::kSame;
  if (sb.empty()) return Broadcast::kScalar;
  if (sa.size() == sb.size() + 1 && std::equal(sa.begin() + 1, sa.end(), sb.begin())) return Broadcast::kRows;
  throw DimensionError(std::string(op) + ": cannot combine shapes " + shape_string(sa) + " and " +
                       shape_string(sb));
}

std::size_t b_index(Broadcast mode, std::size_t i, std::size_t b_size) {
  switch (mode) {
    case Broadcast::kSame:
      return i;
    case Broadcast::kScalar:
      return 0;
    case Broadcast::kRows:
      return i % b_size;
  }
  return i;
}

// Gradient buffer of a parent, or nullptr when the parent is a constant.
double* grad_of(Node& self, std::size_t i) {
  auto& p = *self.parents[i];
  if (!p.requires_grad) return nullptr;
  p.ensure_grad();
  return p.grad.data();
}

template <class Fwd, class DA, class DB>
Tensor binary(const char* op, const Tensor& a, const Tensor& b, Fwd fwd, DA da, DB db) {
  const auto mode = broadcast_mode(op, a, b);
  const auto x = a.data();
  const auto y = b.data();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = fwd(x[i], y[b_index(mode, i, y.size())]);
  return make_result(op, a.shape(), std::move(out), {a, b}, [mode, da, db](Node& self) {
    const auto& x = self.parents[0]->data;
    const auto& y = self.parents[1]->data;
    double* ga = grad_of(self, 0);
    double* gb = grad_of(self, 1);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      const auto j = b_index(mode, i, y.size());
      if (ga) ga[i] += da(x[i], y[j], self.grad[i]);
      if (gb) gb[j] += db(x[i], y[j], self.grad[i]);
    }
  });
}

template <class Fwd, class Deriv>
Tensor unary(const char* op, const Tensor& a, Fwd fwd, Deriv deriv) {
  const auto x = a.data();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = fwd(x[i]);
  // deriv(x, y) receives the input and the forward output.
  return make_result(op, a.shape(), std::move(out), {a}, [deriv](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    const auto& x = self.parents[0]->data;
    for (std::size_t i = 0; i < self.grad.size(); ++i) ga[i] += self.grad[i] * deriv(x[i], self.data[i]);
  });
}

void require_rank(const char* op, const Tensor& a, std::size_t lo, std::size_t hi) {
  if (a.rank() < lo || a.rank() > hi) {
    throw DimensionError(std::string(op) + ": unsupported rank for shape " + shape_string(a.shape()));
  }
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return binary(
      "add", a, b, [](double x, double y) { return x + y; }, [](double, double, double g) { return g; },
      [](double, double, double g) { return g; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary(
      "sub", a, b, [](double x, double y) { return x - y; }, [](double, double, double g) { return g; },
      [](double, double, double g) { return -g; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary(
      "mul", a, b, [](double x, double y) { return x * y; }, [](double, double y, double g) { return g * y; },
      [](double x, double, double g) { return g * x; });
}

Tensor neg(const Tensor& a) {
  return unary(
      "neg", a, [](double x) { return -x; }, [](double, double) { return -1.0; });
}

Tensor scale(const Tensor& a, double k) {
  return unary(
      "scale", a, [k](double x) { return k * x; }, [k](double, double) { return k; });
}

Tensor add_scalar(const Tensor& a, double k) {
  return unary(
      "add_scalar", a, [k](double x) { return x + k; }, [](double, double) { return 1.0; });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows()) {
    throw DimensionError("matmul: cannot multiply " + shape_string(a.shape()) + " by " + shape_string(b.shape()));
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  const auto x = a.data();
  const auto y = b.data();
  std::vector<double> out(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double xv = x[i * k + p];
      if (xv == 0.0) continue;
      const double* yrow = &y[p * n];
      double* orow = &out[i * n];
      for (std::size_t j = 0; j < n; ++j) orow[j] += xv * yrow[j];
    }
  }
  return make_result("matmul", {m, n}, std::move(out), {a, b}, [m, k, n](Node& self) {
    const auto& x = self.parents[0]->data;
    const auto& y = self.parents[1]->data;
    const auto& g = self.grad;
    if (double* ga = grad_of(self, 0)) {
      // dA = G * B^T
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += g[i * n + j] * y[p * n + j];
          ga[i * k + p] += acc;
        }
      }
    }
    if (double* gb = grad_of(self, 1)) {
      // dB = A^T * G
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const double xv = x[i * k + p];
          if (xv == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) gb[p * n + j] += xv * g[i * n + j];
        }
      }
    }
  });
}

Tensor relu(const Tensor& a) {
  return unary(
      "relu", a, [](double x) { return x > 0.0 ? x : 0.0; }, [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor tanh(const Tensor& a) {
  return unary(
      "tanh", a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Tensor exp(const Tensor& a) {
  return unary(
      "exp", a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Tensor log(const Tensor& a) {
  return unary(
      "log", a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Tensor square(const Tensor& a) {
  return unary(
      "square", a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Tensor clamp(const Tensor& a, double lo, double hi) {
  if (!(lo <= hi)) throw ContractError("clamp: empty interval");
  return unary(
      "clamp", a, [lo, hi](double x) { return std::clamp(x, lo, hi); },
      [lo, hi](double x, double) { return (x >= lo && x <= hi) ? 1.0 : 0.0; });
}

Tensor log_softmax(const Tensor& a) {
  require_rank("log_softmax", a, 1, 2);
  const std::size_t rows = a.rank() == 1 ? 1 : a.rows();
  const std::size_t cols = a.cols();
  const auto x = a.data();
  std::vector<double> out(x.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = &x[r * cols];
    const double mx = *std::max_element(xr, xr + cols);
    double z = 0.0;
    for (std::size_t c = 0; c < cols; ++c) z += std::exp(xr[c] - mx);
    const double lse = mx + std::log(z);
    for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] = xr[c] - lse;
  }
  return make_result("log_softmax", a.shape(), std::move(out), {a}, [rows, cols](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    for (std::size_t r = 0; r < rows; ++r) {
      const double* g = &self.grad[r * cols];
      const double* y = &self.data[r * cols];
      double gsum = 0.0;
      for (std::size_t c = 0; c < cols; ++c) gsum += g[c];
      for (std::size_t c = 0; c < cols; ++c) ga[r * cols + c] += g[c] - std::exp(y[c]) * gsum;
    }
  });
}

Tensor sum(const Tensor& a) {
  double s = 0.0;
  for (double v : a.data()) s += v;
  return make_result("sum", {}, {s}, {a}, [](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    const double g = self.grad[0];
    for (std::size_t i = 0; i < self.parents[0]->data.size(); ++i) ga[i] += g;
  });
}

Tensor mean(const Tensor& a) {
  const double n = static_cast<double>(a.size());
  double s = 0.0;
  for (double v : a.data()) s += v;
  return make_result("mean", {}, {s / n}, {a}, [n](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    const double g = self.grad[0] / n;
    for (std::size_t i = 0; i < self.parents[0]->data.size(); ++i) ga[i] += g;
  });
}

Tensor row_sum(const Tensor& a) {
  require_rank("row_sum", a, 2, 2);
  const std::size_t rows = a.rows(), cols = a.cols();
  const auto x = a.data();
  std::vector<double> out(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[r] += x[r * cols + c];
  }
  return make_result("row_sum", {rows}, std::move(out), {a}, [rows, cols](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) ga[r * cols + c] += self.grad[r];
    }
  });
}

Tensor concat(const Tensor& a, const Tensor& b) {
  require_rank("concat", a, 1, 2);
  if (a.rank() != b.rank() || (a.rank() == 2 && a.rows() != b.rows())) {
    throw DimensionError("concat: cannot join " + shape_string(a.shape()) + " and " + shape_string(b.shape()));
  }
  const std::size_t rows = a.rank() == 1 ? 1 : a.rows();
  const std::size_t ca = a.cols(), cb = b.cols(), cw = ca + cb;
  const auto x = a.data();
  const auto y = b.data();
  std::vector<double> out(rows * cw);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(&x[r * ca], ca, &out[r * cw]);
    std::copy_n(&y[r * cb], cb, &out[r * cw + ca]);
  }
  Shape shape = a.rank() == 1 ? Shape{cw} : Shape{rows, cw};
  return make_result("concat", std::move(shape), std::move(out), {a, b}, [rows, ca, cb, cw](Node& self) {
    double* ga = grad_of(self, 0);
    double* gb = grad_of(self, 1);
    for (std::size_t r = 0; r < rows; ++r) {
      if (ga) {
        for (std::size_t c = 0; c < ca; ++c) ga[r * ca + c] += self.grad[r * cw + c];
      }
      if (gb) {
        for (std::size_t c = 0; c < cb; ++c) gb[r * cb + c] += self.grad[r * cw + ca + c];
      }
    }
  });
}

Tensor slice(const Tensor& a, std::size_t begin, std::size_t end) {
  require_rank("slice", a, 1, 2);
  const std::size_t cols = a.cols();
  if (begin >= end || end > cols) {
    throw DimensionError("slice: range [" + std::to_string(begin) + "," + std::to_string(end) +
                         ") out of bounds for " + shape_string(a.shape()));
  }
  const std::size_t rows = a.rank() == 1 ? 1 : a.rows();
  const std::size_t w = end - begin;
  const auto x = a.data();
  std::vector<double> out(rows * w);
  for (std::size_t r = 0; r < rows; ++r) std::copy_n(&x[r * cols + begin], w, &out[r * w]);
  Shape shape = a.rank() == 1 ? Shape{w} : Shape{rows, w};
  return make_result("slice", std::move(shape), std::move(out), {a}, [rows, cols, begin, w](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < w; ++c) ga[r * cols + begin + c] += self.grad[r * w + c];
    }
  });
}

Tensor index_rows(const Tensor& a, std::span<const std::size_t> rows) {
  require_rank("index_rows", a, 1, 2);
  if (rows.empty()) throw DimensionError("index_rows: empty index list");
  const std::size_t width = a.rank() == 1 ? 1 : a.cols();
  const std::size_t n_rows = a.rows();
  const auto x = a.data();
  std::vector<double> out(rows.size() * width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= n_rows) {
      throw DimensionError("index_rows: row " + std::to_string(rows[i]) + " out of range for " +
                           shape_string(a.shape()));
    }
    std::copy_n(&x[rows[i] * width], width, &out[i * width]);
  }
  Shape shape = a.rank() == 1 ? Shape{rows.size()} : Shape{rows.size(), width};
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  return make_result("index_rows", std::move(shape), std::move(out), {a},
                     [idx = std::move(idx), width](Node& self) {
                       double* ga = grad_of(self, 0);
                       if (!ga) return;
                       for (std::size_t i = 0; i < idx.size(); ++i) {
                         for (std::size_t c = 0; c < width; ++c) ga[idx[i] * width + c] += self.grad[i * width + c];
                       }
                     });
}

Tensor segment_mean(const Tensor& a, std::span<const std::size_t> offsets) {
  require_rank("segment_mean", a, 2, 2);
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != a.rows()) {
    throw DimensionError("segment_mean: offsets must run from 0 to " + std::to_string(a.rows()));
  }
  const std::size_t groups = offsets.size() - 1;
  const std::size_t width = a.cols();
  const auto x = a.data();
  std::vector<double> out(groups * width, 0.0);
  for (std::size_t g = 0; g < groups; ++g) {
    if (offsets[g + 1] <= offsets[g]) throw DimensionError("segment_mean: empty or decreasing segment");
    const double inv = 1.0 / static_cast<double>(offsets[g + 1] - offsets[g]);
    for (std::size_t r = offsets[g]; r < offsets[g + 1]; ++r) {
      for (std::size_t c = 0; c < width; ++c) out[g * width + c] += x[r * width + c];
    }
    for (std::size_t c = 0; c < width; ++c) out[g * width + c] *= inv;
  }
  std::vector<std::size_t> offs(offsets.begin(), offsets.end());
  return make_result("segment_mean", {groups, width}, std::move(out), {a},
                     [offs = std::move(offs), width](Node& self) {
                       double* ga = grad_of(self, 0);
                       if (!ga) return;
                       for (std::size_t g = 0; g + 1 < offs.size(); ++g) {
                         const double inv = 1.0 / static_cast<double>(offs[g + 1] - offs[g]);
                         for (std::size_t r = offs[g]; r < offs[g + 1]; ++r) {
                           for (std::size_t c = 0; c < width; ++c) ga[r * width + c] += self.grad[g * width + c] * inv;
                         }
                       }
                     });
}

Tensor take(const Tensor& a, std::span<const std::size_t> flat_indices) {
  if (flat_indices.empty()) throw DimensionError("take: empty index list");
  const auto x = a.data();
  std::vector<double> out(flat_indices.size());
  for (std::size_t i = 0; i < flat_indices.size(); ++i) {
    if (flat_indices[i] >= x.size()) {
      throw DimensionError("take: index " + std::to_string(flat_indices[i]) + " out of range for " +
                           shape_string(a.shape()));
    }
    out[i] = x[flat_indices[i]];
  }
  std::vector<std::size_t> idx(flat_indices.begin(), flat_indices.end());
  const std::size_t n = idx.size();
  return make_result("take", {n}, std::move(out), {a}, [idx = std::move(idx)](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    for (std::size_t i = 0; i < idx.size(); ++i) ga[idx[i]] += self.grad[i];
  });
}

Tensor pairwise_gaussian_log_prob(const Tensor& x, const Tensor& mean, const Tensor& log_var) {
  if (x.rank() != 2 || mean.rank() != 2 || mean.shape() != log_var.shape() || x.cols() != mean.cols()) {
    throw DimensionError("pairwise_gaussian_log_prob: incompatible shapes " + shape_string(x.shape()) + ", " +
                         shape_string(mean.shape()) + ", " + shape_string(log_var.shape()));
  }
  const std::size_t m = x.rows(), k = mean.rows(), d = x.cols();
  const auto xs = x.data();
  const auto mu = mean.data();
  const auto lv = log_var.data();
  std::vector<double> inv_var(k * d);
  std::vector<double> norm(k, 0.0);
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  for (std::size_t b = 0; b < k; ++b) {
    for (std::size_t c = 0; c < d; ++c) {
      inv_var[b * d + c] = std::exp(-lv[b * d + c]);
      norm[b] += log_2pi + lv[b * d + c];
    }
  }
  std::vector<double> out(m * k);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t b = 0; b < k; ++b) {
      double q = norm[b];
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = xs[j * d + c] - mu[b * d + c];
        q += diff * diff * inv_var[b * d + c];
      }
      out[j * k + b] = -0.5 * q;
    }
  }
  return make_result("pairwise_gaussian_log_prob", {m, k}, std::move(out), {x, mean, log_var},
                     [m, k, d, inv_var = std::move(inv_var)](Node& self) {
                       const auto& xs = self.parents[0]->data;
                       const auto& mu = self.parents[1]->data;
                       double* gx = grad_of(self, 0);
                       double* gm = grad_of(self, 1);
                       double* gl = grad_of(self, 2);
                       for (std::size_t j = 0; j < m; ++j) {
                         for (std::size_t b = 0; b < k; ++b) {
                           const double g = self.grad[j * k + b];
                           if (g == 0.0) continue;
                           for (std::size_t c = 0; c < d; ++c) {
                             const double iv = inv_var[b * d + c];
                             const double diff = xs[j * d + c] - mu[b * d + c];
                             const double t = diff * iv * g;
                             if (gx) gx[j * d + c] -= t;
                             if (gm) gm[b * d + c] += t;
                             if (gl) gl[b * d + c] -= 0.5 * g * (1.0 - diff * diff * iv);
                           }
                         }
                       }
                     });
}

Tensor mean_pairwise_gaussian_log_prob(const Tensor& x, const Tensor& mean, const Tensor& log_var) {
  if (x.rank() != 2 || mean.rank() != 2 || mean.shape() != log_var.shape() || x.cols() != mean.cols()) {
    throw DimensionError("mean_pairwise_gaussian_log_prob: incompatible shapes " + shape_string(x.shape()) + ", " +
                         shape_string(mean.shape()) + ", " + shape_string(log_var.shape()));
  }
  const std::size_t m = x.rows(), k = mean.rows(), d = x.cols();
  const double dm = static_cast<double>(m), dk = static_cast<double>(k);
  const auto xs = x.data();
  const auto mu = mean.data();
  const auto lv = log_var.data();
  // sum_j (x_j - mu)^2 = centered + m (xbar - mu)^2, per dimension.
  std::vector<double> xbar(d, 0.0), centered(d, 0.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t c = 0; c < d; ++c) xbar[c] += xs[j * d + c];
  for (auto& v : xbar) v /= dm;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t c = 0; c < d; ++c) {
      const double t = xs[j * d + c] - xbar[c];
      centered[c] += t * t;
    }
  }
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  double total = 0.0;
  for (std::size_t b = 0; b < k; ++b) {
    for (std::size_t c = 0; c < d; ++c) {
      const double off = xbar[c] - mu[b * d + c];
      const double q = centered[c] + dm * off * off;
      total += dm * (log_2pi + lv[b * d + c]) + q * std::exp(-lv[b * d + c]);
    }
  }
  const double value = -0.5 * total / (dm * dk);
  return make_result("mean_pairwise_gaussian_log_prob", {}, {value}, {x, mean, log_var},
                     [m, k, d, dm, dk, xbar = std::move(xbar), centered = std::move(centered)](Node& self) {
                       const auto& xs = self.parents[0]->data;
                       const auto& mu = self.parents[1]->data;
                       const auto& lv = self.parents[2]->data;
                       const double g = self.grad[0] / (dm * dk);
                       double* gx = grad_of(self, 0);
                       double* gm = grad_of(self, 1);
                       double* gl = grad_of(self, 2);
                       if (gx) {
                         // d/dx_j = -g * sum_k iv_k (x_j - mu_k)
                         std::vector<double> iv_sum(d, 0.0), mu_iv_sum(d, 0.0);
                         for (std::size_t b = 0; b < k; ++b) {
                           for (std::size_t c = 0; c < d; ++c) {
                             const double iv = std::exp(-lv[b * d + c]);
                             iv_sum[c] += iv;
                             mu_iv_sum[c] += mu[b * d + c] * iv;
                           }
                         }
                         for (std::size_t j = 0; j < m; ++j)
                           for (std::size_t c = 0; c < d; ++c)
                             gx[j * d + c] -= g * (xs[j * d + c] * iv_sum[c] - mu_iv_sum[c]);
                       }
                       for (std::size_t b = 0; b < k; ++b) {
                         for (std::size_t c = 0; c < d; ++c) {
                           const double iv = std::exp(-lv[b * d + c]);
                           const double off = xbar[c] - mu[b * d + c];
                           if (gm) gm[b * d + c] += g * iv * dm * off;
                           if (gl) {
                             const double q = centered[c] + dm * off * off;
                             gl[b * d + c] -= 0.5 * g * (dm - q * iv);
                           }
                         }
                       }
                     });
}

}  // namespace idel::num
