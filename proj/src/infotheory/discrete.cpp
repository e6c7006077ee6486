// SPDX-License-Identifier: Apache-2.0
#include "idel/infotheory/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "idel/errors.hpp"

namespace idel::info {

namespace {

void check_alphabet(std::size_t n) {
  if (n == 0 || n > kMaxAlphabet) {
    throw ContractError("discrete oracle: alphabet size " + std::to_string(n) + " outside [1, " +
                        std::to_string(kMaxAlphabet) + "]");
  }
}

void check_distribution(std::span<const double> p, const char* what) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ContractError(std::string(what) + ": negative or non-finite probability");
    total += v;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw ContractError(std::string(what) + ": probabilities sum to " + std::to_string(total));
  }
}

double plogp(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace

JointDiscrete::JointDiscrete(std::size_t nx, std::size_t ny, std::vector<double> table)
    : nx_(nx), ny_(ny), table_(std::move(table)) {
  check_alphabet(nx_);
  check_alphabet(ny_);
  if (table_.size() != nx_ * ny_) throw DimensionError("joint: table size does not match alphabet sizes");
  check_distribution(table_, "joint");
}

JointDiscrete JointDiscrete::independent(std::span<const double> px, std::span<const double> py) {
  check_distribution(px, "marginal");
  check_distribution(py, "marginal");
  std::vector<double> t(px.size() * py.size());
  double total = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    for (std::size_t j = 0; j < py.size(); ++j) total += t[i * py.size() + j] = px[i] * py[j];
  }
  for (auto& v : t) v /= total;
  return JointDiscrete(px.size(), py.size(), std::move(t));
}

std::vector<double> JointDiscrete::marginal_x() const {
  std::vector<double> m(nx_, 0.0);
  for (std::size_t i = 0; i < nx_; ++i) {
    for (std::size_t j = 0; j < ny_; ++j) m[i] += (*this)(i, j);
  }
  return m;
}

std::vector<double> JointDiscrete::marginal_y() const {
  std::vector<double> m(ny_, 0.0);
  for (std::size_t i = 0; i < nx_; ++i) {
    for (std::size_t j = 0; j < ny_; ++j) m[j] += (*this)(i, j);
  }
  return m;
}

JointDiscrete3::JointDiscrete3(std::size_t nx, std::size_t ny, std::size_t nz, std::vector<double> table)
    : nx_(nx), ny_(ny), nz_(nz), table_(std::move(table)) {
  check_alphabet(nx_);
  check_alphabet(ny_);
  check_alphabet(nz_);
  if (table_.size() != nx_ * ny_ * nz_) throw DimensionError("joint3: table size does not match alphabet sizes");
  check_distribution(table_, "joint3");
}

JointDiscrete JointDiscrete3::xy() const {
  std::vector<double> t(nx_ * ny_, 0.0);
  for (std::size_t i = 0; i < nx_; ++i)
    for (std::size_t j = 0; j < ny_; ++j)
      for (std::size_t k = 0; k < nz_; ++k) t[i * ny_ + j] += (*this)(i, j, k);
  return JointDiscrete(nx_, ny_, std::move(t));
}

JointDiscrete JointDiscrete3::xz() const {
  std::vector<double> t(nx_ * nz_, 0.0);
  for (std::size_t i = 0; i < nx_; ++i)
    for (std::size_t j = 0; j < ny_; ++j)
      for (std::size_t k = 0; k < nz_; ++k) t[i * nz_ + k] += (*this)(i, j, k);
  return JointDiscrete(nx_, nz_, std::move(t));
}

JointDiscrete JointDiscrete3::yz() const {
  std::vector<double> t(ny_ * nz_, 0.0);
  for (std::size_t i = 0; i < nx_; ++i)
    for (std::size_t j = 0; j < ny_; ++j)
      for (std::size_t k = 0; k < nz_; ++k) t[j * nz_ + k] += (*this)(i, j, k);
  return JointDiscrete(ny_, nz_, std::move(t));
}

double entropy(std::span<const double> p) {
  if (p.empty()) throw ContractError("entropy: empty distribution");
  check_distribution(p, "entropy");
  double h = 0.0;
  for (double v : p) h -= plogp(v);
  return std::max(0.0, h);
}

double mutual_information(const JointDiscrete& joint) {
  const auto px = joint.marginal_x();
  const auto py = joint.marginal_y();
  double mi = 0.0;
  for (std::size_t i = 0; i < joint.nx(); ++i) {
    for (std::size_t j = 0; j < joint.ny(); ++j) {
      const double p = joint(i, j);
      if (p > 0.0) mi += p * std::log(p / (px[i] * py[j]));
    }
  }
  return std::max(0.0, mi);
}

double variation_of_information(const JointDiscrete& joint) {
  const double vi = entropy(joint.marginal_x()) + entropy(joint.marginal_y()) - 2.0 * mutual_information(joint);
  return std::max(0.0, vi);
}

double disentanglement_measure(const JointDiscrete3& xsc) {
  const auto xs = xsc.xy();
  const auto xc = xsc.xz();
  const auto sc = xsc.yz();
  return variation_of_information(xs) + variation_of_information(xc) - variation_of_information(sc);
}

double disentanglement_identity_form(const JointDiscrete3& xsc) {
  const auto xs = xsc.xy();
  const auto xc = xsc.xz();
  const auto sc = xsc.yz();
  return 2.0 * entropy(xs.marginal_x()) +
         2.0 * (mutual_information(sc) - mutual_information(xc) - mutual_information(xs));
}

}  // namespace idel::info
