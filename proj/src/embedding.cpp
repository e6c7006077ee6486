// SPDX-License-Identifier: Apache-2.0
#include "idel/embedding.hpp"

#include "idel/errors.hpp"

namespace idel {

void EmbeddingBatch::validate() const {
  if (!s.defined() || !c.defined()) throw DimensionError("embedding batch: undefined tensors");
  if (s.rank() != 2 || c.rank() != 2 || s.rows() != c.rows()) {
    throw DimensionError("embedding batch: s " + num::shape_string(s.shape()) + " and c " +
                         num::shape_string(c.shape()) + " do not pair row for row");
  }
}

}  // namespace idel
