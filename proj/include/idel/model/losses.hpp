// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "idel/mibounds/conditional.hpp"
#include "idel/model/networks.hpp"

namespace idel::model {

/// Loss-term subsets trained by the ablation sweep, in report order.
enum class Variant { kVaeOnly, kVaeStyle, kVaeRecon, kNoClub, kFull, kFullNonStochastic };

std::string_view variant_name(Variant v);
/// Accepts vae_only, vae+style, vae+recon, no_club, full, full_nonstochastic.
Variant parse_variant(std::string_view name);
std::span<const Variant> all_variants();

struct VariantTerms {
  bool style = false;
  bool recon = false;
  bool club = false;
  bool club_full = false;
};
VariantTerms variant_terms(Variant v);

/// mean_b -log q_psi(y_b | s_b).
num::Tensor loss_style(const Classifier& clf, const num::Tensor& s, std::span<const int> labels);

/// mean_b of the per-token NLL -(1/L_b) sum_v n_bv log q_phi(v | c_b), where
/// `freqs` holds n_bv / L_b.
num::Tensor loss_content_recon(const ContentDecoder& dec, const num::Tensor& c, const num::Tensor& freqs);

struct VaeTerms {
  num::Tensor total;
  num::Tensor kl;   // batch mean of KL(q(s|x) || N(0,I)) + KL(q(c|x) || N(0,I))
  num::Tensor nll;  // batch mean of the generator's per-token NLL
};
/// Throws DivergenceError (step 0) on a non-finite value.
VaeTerms loss_vae(const Encoder::Posterior& post, const Generator& gen, const EmbeddingBatch& sample,
                  const num::Tensor& freqs);

struct TotalTerms {
  num::Tensor total;
  VaeTerms vae;
  std::optional<num::Tensor> club;
  std::optional<num::Tensor> recon;
  std::optional<num::Tensor> style;
};

/// References to the trainable pieces; the approximator is frozen.
struct ModelView {
  const Encoder& encoder;
  const Classifier& classifier;
  const ContentDecoder& decoder;
  const Generator& generator;
  const mi::GaussianConditional& approximator;
};

/// beta * (club + recon + style) + vae over the variant's terms. For the
/// stochastic CLUB, `negatives` holds k'_j per row. With beta == 0 the
/// result is exactly the VAE loss.
TotalTerms loss_total(const ModelView& model, const Encoded& encoded, std::span<const LabeledSequence> batch,
                      double beta, Variant variant, std::span<const std::size_t> negatives);

}  // namespace idel::model
