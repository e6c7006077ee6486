// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Two-sample divergences between embedding groups split by style label.

namespace idel::div {

enum class MetricKind { kEuclidean, kCosine };

std::string_view metric_name(MetricKind kind);
/// Accepts "euclidean" or "cosine"; throws ContractError otherwise.
MetricKind parse_metric(std::string_view name);

/// d(u, v). Cosine distance is 1 - u.v / (|u| |v|) and rejects zero vectors
/// with DomainError.
struct GroundMetric {
  MetricKind kind = MetricKind::kCosine;

  double operator()(std::span<const double> u, std::span<const double> v) const;
};

/// Non-empty set of equal-width points, row-major.
class SampleGroup {
 public:
  SampleGroup(std::size_t dim, std::vector<double> flat, int label, std::string name = {});
  static SampleGroup from_rows(const std::vector<std::vector<double>>& rows, int label, std::string name = {});

  std::size_t size() const { return flat_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  int label() const { return label_; }
  const std::string& name() const { return name_; }
  std::span<const double> point(std::size_t i) const { return {flat_.data() + i * dim_, dim_}; }
  std::vector<double> mean() const;

 private:
  std::size_t dim_;
  std::vector<double> flat_;
  int label_;
  std::string name_;
};

/// Largest N0 * N1 the exact transport solver accepts.
inline constexpr std::size_t kWassersteinBudget = 1'000'000;

/// d(mean(a), mean(b)).
double mad(const SampleGroup& a, const SampleGroup& b, const GroundMetric& d);
/// 2/(N0 N1) sum d(a_i, b_j) - 1/N0^2 sum d(a_i, a_i') - 1/N1^2 sum d(b_j, b_j').
double energy_distance(const SampleGroup& a, const SampleGroup& b, const GroundMetric& d);
/// Exact optimum of min sum p_ij d(a_i, b_j) over couplings with row sums
/// 1/N0 and column sums 1/N1. Throws CapacityError above kWassersteinBudget.
double wasserstein(const SampleGroup& a, const SampleGroup& b, const GroundMetric& d);
/// Biased V-statistic with K(u, v) = exp(-|u - v|^2 / (2 w^2)), diagonal
/// terms included.
double mmd(const SampleGroup& a, const SampleGroup& b, double bandwidth = 1.0);

/// Exact transport on an explicit dense cost matrix (rows: sources with
/// mass 1/rows each, columns: sinks with mass 1/cols each).
double transport_cost(std::size_t rows, std::size_t cols, std::span<const double> cost);

struct DivergenceRow {
  std::string group_a;
  std::string group_b;
  MetricKind metric = MetricKind::kCosine;
  double mad = 0.0;
  double ed = 0.0;
  double wd = 0.0;
  double mmd = 0.0;

  static std::string csv_header();
  /// Values printed with 17 significant digits so rows round-trip exactly.
  std::string csv() const;
};

/// All four divergences between two label groups. MMD uses `bandwidth` and
/// the Euclidean kernel distance regardless of `d`.
DivergenceRow label_embedding_report(const SampleGroup& a, const SampleGroup& b, const GroundMetric& d,
                                     double bandwidth = 1.0);

}  // namespace idel::div
