// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "idel/divergences/divergences.hpp"
#include "idel/errors.hpp"

namespace idel::div {

namespace {

// Transportation simplex over a spanning-tree basis. Nodes 0..m-1 are
// sources, m..m+n-1 are sinks. Supplies are integer-scaled and perturbed
// (source i gets K n + 1, the last sink absorbs the extra m) so that every
// basic solution is strictly positive: pivots never degenerate and never
// cycle. Unperturbed flows are recovered as round(flow / K) since the
// perturbation moves any basic flow by at most m < K / 2.
class TransportSimplex {
 public:
  TransportSimplex(std::size_t m, std::size_t n, std::span<const double> cost)
      : m_(m), n_(n), cost_(cost), scale_(2 * static_cast<std::int64_t>(m) + 2) {
    northwest_corner();
  }

  double solve() {
    const double max_cost = *std::max_element(cost_.begin(), cost_.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    const double tol = 1e-12 * (1.0 + std::abs(max_cost));
    const std::size_t cells = m_ * n_;
    const std::size_t block = std::max<std::size_t>(64, static_cast<std::size_t>(std::sqrt(double(cells))));
    std::size_t cursor = 0;
    while (true) {
      compute_potentials();
      // Block pricing: scan from `cursor`, stop at the first block holding a
      // negative reduced cost and take that block's most negative cell.
      std::size_t best = cells;
      double best_rc = -tol;
      std::size_t scanned = 0;
      while (scanned < cells) {
        const std::size_t stop = std::min(cells, scanned + block);
        for (; scanned < stop; ++scanned) {
          const std::size_t cell = (cursor + scanned) % cells;
          const std::size_t i = cell / n_, j = cell % n_;
          const double rc = cost_[cell] - u_[i] - v_[j];
          if (rc < best_rc) {
            best_rc = rc;
            best = cell;
          }
        }
        if (best != cells) break;
      }
      if (best == cells) break;
      cursor = (cursor + scanned) % cells;
      pivot(best / n_, best % n_);
    }
    double total = 0.0;
    for (const auto& b : basis_) {
      const std::int64_t flow = (b.flow + scale_ / 2) / scale_;
      total += static_cast<double>(flow) * cost_[b.i * n_ + b.j];
    }
    return total / (static_cast<double>(m_) * static_cast<double>(n_));
  }

 private:
  struct Cell {
    std::size_t i, j;
    std::int64_t flow;
  };

  void add_cell(std::size_t i, std::size_t j, std::int64_t flow) {
    adjacency_[i].push_back(basis_.size());
    adjacency_[m_ + j].push_back(basis_.size());
    basis_.push_back({i, j, flow});
  }

  void northwest_corner() {
    adjacency_.assign(m_ + n_, {});
    std::vector<std::int64_t> supply(m_, scale_ * static_cast<std::int64_t>(n_) + 1);
    std::vector<std::int64_t> demand(n_, scale_ * static_cast<std::int64_t>(m_));
    demand.back() += static_cast<std::int64_t>(m_);
    std::size_t i = 0, j = 0;
    while (i < m_ && j < n_) {
      const std::int64_t q = std::min(supply[i], demand[j]);
      add_cell(i, j, q);
      supply[i] -= q;
      demand[j] -= q;
      if (supply[i] == 0) ++i;
      if (demand[j] == 0) ++j;
    }
    if (basis_.size() != m_ + n_ - 1) throw ContractError("transport: degenerate initial basis");
  }

  void compute_potentials() {
    const std::size_t nodes = m_ + n_;
    u_.assign(m_, 0.0);
    v_.assign(n_, 0.0);
    parent_cell_.assign(nodes, kNone);
    parent_.assign(nodes, kNone);
    depth_.assign(nodes, 0);
    std::vector<std::size_t> queue{0};
    std::vector<bool> seen(nodes, false);
    seen[0] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t node = queue[head];
      for (std::size_t idx : adjacency_[node]) {
        const auto& b = basis_[idx];
        const std::size_t other = node < m_ ? m_ + b.j : b.i;
        if (seen[other]) continue;
        seen[other] = true;
        const double c = cost_[b.i * n_ + b.j];
        if (other < m_) {
          u_[other] = c - v_[b.j];
        } else {
          v_[b.j] = c - u_[b.i];
        }
        parent_[other] = node;
        parent_cell_[other] = idx;
        depth_[other] = depth_[node] + 1;
        queue.push_back(other);
      }
    }
  }

  void pivot(std::size_t ei, std::size_t ej) {
    // Tree path from the sink back to the source; signs alternate starting
    // with a decrease on the cell next to the sink.
    std::size_t a = ei, b = m_ + ej;
    std::vector<std::size_t> from_source, from_sink;
    while (a != b) {
      if (depth_[a] >= depth_[b]) {
        from_source.push_back(parent_cell_[a]);
        a = parent_[a];
      } else {
        from_sink.push_back(parent_cell_[b]);
        b = parent_[b];
      }
    }
    std::vector<std::size_t> cycle = std::move(from_sink);
    cycle.insert(cycle.end(), from_source.rbegin(), from_source.rend());

    std::size_t leaving = kNone;
    std::int64_t theta = std::numeric_limits<std::int64_t>::max();
    for (std::size_t k = 0; k < cycle.size(); k += 2) {
      if (basis_[cycle[k]].flow < theta) {
        theta = basis_[cycle[k]].flow;
        leaving = cycle[k];
      }
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) basis_[cycle[k]].flow += (k % 2 == 0) ? -theta : theta;

    auto unlink = [&](std::size_t node) {
      auto& adj = adjacency_[node];
      adj.erase(std::find(adj.begin(), adj.end(), leaving));
    };
    unlink(basis_[leaving].i);
    unlink(m_ + basis_[leaving].j);
    basis_[leaving] = {ei, ej, theta};
    adjacency_[ei].push_back(leaving);
    adjacency_[m_ + ej].push_back(leaving);
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::size_t m_, n_;
  std::span<const double> cost_;
  std::int64_t scale_;
  std::vector<Cell> basis_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<double> u_, v_;
  std::vector<std::size_t> parent_, parent_cell_, depth_;
};

}  // namespace

double transport_cost(std::size_t rows, std::size_t cols, std::span<const double> cost) {
  if (rows == 0 || cols == 0) throw ContractError("transport: empty side");
  if (cost.size() != rows * cols) throw DimensionError("transport: cost matrix size does not match rows * cols");
  if (rows * cols > kWassersteinBudget) {
    throw CapacityError("transport: " + std::to_string(rows) + " x " + std::to_string(cols) +
                        " exceeds the exact solver budget of " + std::to_string(kWassersteinBudget) + " cells");
  }
  for (double c : cost) {
    if (!std::isfinite(c)) throw DomainError("transport: non-finite cost");
  }
  return TransportSimplex(rows, cols, cost).solve();
}

}  // namespace idel::div
