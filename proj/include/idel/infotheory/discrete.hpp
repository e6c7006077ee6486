// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Exact information quantities on finite alphabets, in nats. These exist to
// verify identities and bounds, so alphabets are capped at kMaxAlphabet.

namespace idel::info {

inline constexpr std::size_t kMaxAlphabet = 64;
inline constexpr double kNormTolerance = 1e-12;

/// p(x = i, y = j), row-major over x.
class JointDiscrete {
 public:
  JointDiscrete(std::size_t nx, std::size_t ny, std::vector<double> table);
  static JointDiscrete independent(std::span<const double> px, std::span<const double> py);

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double operator()(std::size_t i, std::size_t j) const { return table_[i * ny_ + j]; }
  std::span<const double> table() const { return table_; }
  std::vector<double> marginal_x() const;
  std::vector<double> marginal_y() const;

 private:
  std::size_t nx_, ny_;
  std::vector<double> table_;
};

/// p(x = i, y = j, z = k), row-major with z fastest.
class JointDiscrete3 {
 public:
  JointDiscrete3(std::size_t nx, std::size_t ny, std::size_t nz, std::vector<double> table);

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t nz() const { return nz_; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const { return table_[(i * ny_ + j) * nz_ + k]; }

  JointDiscrete xy() const;
  JointDiscrete xz() const;
  JointDiscrete yz() const;

 private:
  std::size_t nx_, ny_, nz_;
  std::vector<double> table_;
};

/// H(p) = -sum p log p with 0 log 0 = 0.
double entropy(std::span<const double> p);
double mutual_information(const JointDiscrete& joint);
/// VI(x;y) = H(x) + H(y) - 2 I(x;y).
double variation_of_information(const JointDiscrete& joint);

/// D(x; s, c) = VI(s;x) + VI(x;c) - VI(c;s) for a joint over (x, s, c).
double disentanglement_measure(const JointDiscrete3& xsc);
/// The same quantity through 2 H(x) + 2 [I(s;c) - I(x;c) - I(x;s)].
double disentanglement_identity_form(const JointDiscrete3& xsc);

}  // namespace idel::info
