// SPDX-License-Identifier: Apache-2.0
#include "idel/divergences/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "idel/errors.hpp"

namespace idel::div {

std::string_view metric_name(MetricKind kind) { return kind == MetricKind::kCosine ? "cosine" : "euclidean"; }

MetricKind parse_metric(std::string_view name) {
  if (name == "cosine") return MetricKind::kCosine;
  if (name == "euclidean") return MetricKind::kEuclidean;
  throw ContractError("unknown ground metric '" + std::string(name) + "' (expected cosine or euclidean)");
}

double GroundMetric::operator()(std::span<const double> u, std::span<const double> v) const {
  if (u.size() != v.size()) throw DimensionError("ground metric: vectors of different dimension");
  if (kind == MetricKind::kEuclidean) {
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) s += (u[k] - v[k]) * (u[k] - v[k]);
    return std::sqrt(s);
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    dot += u[k] * v[k];
    uu += u[k] * u[k];
    vv += v[k] * v[k];
  }
  if (uu == 0.0 || vv == 0.0) throw DomainError("cosine distance: zero vector");
  return std::max(0.0, 1.0 - dot / (std::sqrt(uu) * std::sqrt(vv)));
}

SampleGroup::SampleGroup(std::size_t dim, std::vector<double> flat, int label, std::string name)
    : dim_(dim), flat_(std::move(flat)), label_(label), name_(std::move(name)) {
  if (dim_ == 0 || flat_.empty()) throw ContractError("sample group: empty group");
  if (flat_.size() % dim_ != 0) throw DimensionError("sample group: data is not a whole number of points");
}

SampleGroup SampleGroup::from_rows(const std::vector<std::vector<double>>& rows, int label, std::string name) {
  if (rows.empty()) throw ContractError("sample group: empty group");
  const std::size_t dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (const auto& r : rows) {
    if (r.size() != dim) throw DimensionError("sample group: points of different dimension");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return SampleGroup(dim, std::move(flat), label, std::move(name));
}

std::vector<double> SampleGroup::mean() const {
  std::vector<double> m(dim_, 0.0);
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t k = 0; k < dim_; ++k) m[k] += flat_[i * dim_ + k];
  for (auto& x : m) x /= static_cast<double>(size());
  return m;
}

namespace {

void check_pair(const SampleGroup& a, const SampleGroup& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("divergence: group dimensions differ (" + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
  }
}

// Row-major sum over all (i, j) of f(a_i, b_j).
template <class F>
double pair_sum(const SampleGroup& a, const SampleGroup& b, F&& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) total += f(a.point(i), b.point(j));
  return total;
}

double energy_from_sums(double cross, double within_a, double within_b, double na, double nb) {
  return 2.0 * cross / (na * nb) - within_a / (na * na) - within_b / (nb * nb);
}

std::vector<double> cost_matrix(const SampleGroup& a, const SampleGroup& b, const GroundMetric& d) {
  std::vector<double> cost(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) cost[i * b.size() + j] = d(a.point(i), b.point(j));
  return cost;
}

void check_budget(const SampleGroup& a, const SampleGroup& b) {
  if (a.size() * b.size() > kWassersteinBudget) {
    throw CapacityError("wasserstein: " + std::to_string(a.size()) + " x " + std::to_string(b.size()) +
                        " points exceeds the exact solver budget of " + std::to_string(kWassersteinBudget) +
                        " pairs");
  }
}

}  // namespace

double mad(const SampleGroup& a, const SampleGroup& b, const GroundMetric& d) {
  check_pair(a, b);
  return d(a.mean(), b.mean());
}

double energy_distance(const SampleGroup& a, const SampleGroup& b, const GroundMetric& d) {
  check_pair(a, b);
  return energy_from_sums(pair_sum(a, b, d), pair_sum(a, a, d), pair_sum(b, b, d), double(a.size()),
                          double(b.size()));
}

double wasserstein(const SampleGroup& a, const SampleGroup& b, const GroundMetric& d) {
  check_pair(a, b);
  check_budget(a, b);
  const auto cost = cost_matrix(a, b, d);
  return transport_cost(a.size(), b.size(), cost);
}

double mmd(const SampleGroup& a, const SampleGroup& b, double bandwidth) {
  check_pair(a, b);
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw DomainError("mmd: bandwidth must be positive and finite, got " + std::to_string(bandwidth));
  }
  const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
  auto kernel = [inv](std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) s += (u[k] - v[k]) * (u[k] - v[k]);
    return std::exp(-s * inv);
  };
  const double na = double(a.size()), nb = double(b.size());
  return pair_sum(a, a, kernel) / (na * na) + pair_sum(b, b, kernel) / (nb * nb) -
         2.0 * pair_sum(a, b, kernel) / (na * nb);
}

std::string DivergenceRow::csv_header() { return "group_a,group_b,metric_kind,mad,ed,wd,mmd"; }

std::string DivergenceRow::csv() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g", mad, ed, wd, mmd);
  return group_a + "," + group_b + "," + std::string(metric_name(metric)) + buf;
}

DivergenceRow label_embedding_report(const SampleGroup& a, const SampleGroup& b, const GroundMetric& d,
                                     double bandwidth) {
  check_pair(a, b);
  check_budget(a, b);
  DivergenceRow row;
  row.group_a = a.name().empty() ? "label_" + std::to_string(a.label()) : a.name();
  row.group_b = b.name().empty() ? "label_" + std::to_string(b.label()) : b.name();
  row.metric = d.kind;
  row.mad = mad(a, b, d);
  const auto cost = cost_matrix(a, b, d);
  double cross = 0.0;
  for (double c : cost) cross += c;
  row.ed = energy_from_sums(cross, pair_sum(a, a, d), pair_sum(b, b, d), double(a.size()), double(b.size()));
  row.wd = transport_cost(a.size(), b.size(), cost);
  row.mmd = mmd(a, b, bandwidth);
  return row;
}

}  // namespace idel::div
