// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "idel/numcore/tensor.hpp"

namespace idel {

/// A batch of (style, content) embedding pairs: row j of `s` pairs with row j
/// of `c`. Shapes [M, d_s] and [M, d_c].
struct EmbeddingBatch {
  num::Tensor s;
  num::Tensor c;

  std::size_t size() const { return s.rows(); }
  /// Throws DimensionError unless both are rank-2 with equal row counts.
  void validate() const;
  EmbeddingBatch detached() const { return {s.detach(), c.detach()}; }
};

}  // namespace idel
