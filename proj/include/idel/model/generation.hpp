// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "idel/model/corpus.hpp"
#include "idel/model/trainer.hpp"
#include "idel/numcore/tensor.hpp"

namespace idel::model {

using TokenList = std::vector<std::uint32_t>;

/// Bag decoding of `length` tokens per row of [B, V] log-probabilities: each
/// pick takes argmax_v (length * p_v - count_v), ties to the lower id. The
/// counts track length * p as closely as integer counts allow. Output is
/// sorted ascending, since the bag carries no order.
std::vector<TokenList> greedy_decode(const num::Tensor& log_probs, std::size_t length);

/// s from x_style and c from x_content, both zero-noise, decoded greedily to
/// x_content's length. Throws ContractError on an untrained model.
TokenList transfer(const TrainedModel& model, const LabeledSequence& x_content, const LabeledSequence& x_style);
std::vector<TokenList> transfer_batch(const TrainedModel& model, std::span<const LabeledSequence> contents,
                                      std::span<const LabeledSequence> styles);

enum class FixedFactor { kStyle, kContent };

/// Keeps the chosen factor at x's zero-noise posterior mean and draws the
/// other from N(0, I) with Rng(seed, "generation"); n decodes of x's length.
std::vector<TokenList> conditional_generate(const TrainedModel& model, const LabeledSequence& x, FixedFactor fixed,
                                            std::size_t n, std::uint64_t seed);

}  // namespace idel::model
