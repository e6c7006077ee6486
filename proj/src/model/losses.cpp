// SPDX-License-Identifier: Apache-2.0
#include "idel/model/losses.hpp"

#include <array>
#include <cmath>
#include <string>

#include "idel/errors.hpp"
#include "idel/mibounds/estimators.hpp"
#include "idel/numcore/ops.hpp"

namespace idel::model {

using num::Tensor;

namespace {

constexpr std::array kVariants{Variant::kVaeOnly, Variant::kVaeStyle, Variant::kVaeRecon,
                               Variant::kNoClub,  Variant::kFull,     Variant::kFullNonStochastic};

Tensor bag_nll(const Tensor& log_probs, const Tensor& freqs) {
  if (log_probs.shape() != freqs.shape()) {
    throw DimensionError("bag nll: log-probabilities " + num::shape_string(log_probs.shape()) + " vs frequencies " +
                         num::shape_string(freqs.shape()));
  }
  return -num::mean(num::row_sum(log_probs * freqs));
}

void check_finite(const Tensor& t, const char* what) {
  if (!std::isfinite(t.item())) throw DivergenceError(std::string(what) + ": non-finite value", 0);
}

}  // namespace

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kVaeOnly: return "vae_only";
    case Variant::kVaeStyle: return "vae+style";
    case Variant::kVaeRecon: return "vae+recon";
    case Variant::kNoClub: return "no_club";
    case Variant::kFull: return "full";
    case Variant::kFullNonStochastic: return "full_nonstochastic";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (auto v : kVariants) {
    if (variant_name(v) == name) return v;
  }
  throw ContractError("unknown variant '" + std::string(name) + "'");
}

std::span<const Variant> all_variants() { return kVariants; }

VariantTerms variant_terms(Variant v) {
  switch (v) {
    case Variant::kVaeOnly: return {};
    case Variant::kVaeStyle: return {.style = true};
    case Variant::kVaeRecon: return {.recon = true};
    case Variant::kNoClub: return {.style = true, .recon = true};
    case Variant::kFull: return {.style = true, .recon = true, .club = true};
    case Variant::kFullNonStochastic: return {.style = true, .recon = true, .club = true, .club_full = true};
  }
  return {};
}

Tensor loss_style(const Classifier& clf, const Tensor& s, std::span<const int> labels) {
  const Tensor lp = clf.log_probs(s);
  if (labels.size() != lp.rows()) throw DimensionError("loss_style: one label per row required");
  const std::size_t classes = lp.cols();
  std::vector<std::size_t> picks(labels.size());
  for (std::size_t b = 0; b < labels.size(); ++b) {
    if (labels[b] < 0 || static_cast<std::size_t>(labels[b]) >= classes) {
      throw ContractError("loss_style: label " + std::to_string(labels[b]) + " outside [0, " +
                          std::to_string(classes) + ")");
    }
    picks[b] = b * classes + static_cast<std::size_t>(labels[b]);
  }
  return -num::mean(num::take(lp, picks));
}

Tensor loss_content_recon(const ContentDecoder& dec, const Tensor& c, const Tensor& freqs) {
  return bag_nll(dec.log_probs(c), freqs);
}

VaeTerms loss_vae(const Encoder::Posterior& post, const Generator& gen, const EmbeddingBatch& sample,
                  const Tensor& freqs) {
  const Tensor kl = num::mean(info::gaussian_kl_to_standard(post.s) + info::gaussian_kl_to_standard(post.c));
  const Tensor nll = bag_nll(gen.log_probs(sample.s, sample.c), freqs);
  VaeTerms out{kl + nll, kl, nll};
  check_finite(out.total, "loss_vae");
  return out;
}

TotalTerms loss_total(const ModelView& model, const Encoded& encoded, std::span<const LabeledSequence> batch,
                      double beta, Variant variant, std::span<const std::size_t> negatives) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ContractError("loss_total: beta must be finite and >= 0");
  const Tensor freqs = bag_frequencies(batch, model.encoder.dims().vocab);
  TotalTerms out{Tensor(), loss_vae(encoded.posterior, model.generator, encoded.sample, freqs), {}, {}, {}};
  if (beta == 0.0) {
    out.total = out.vae.total;
    return out;
  }
  const auto terms = variant_terms(variant);
  std::optional<Tensor> dis;
  auto accumulate = [&dis](const Tensor& t) { dis = dis ? *dis + t : t; };
  if (terms.club) {
    out.club = terms.club_full ? mi::club_full(encoded.sample, model.approximator)
                               : mi::club_stochastic(encoded.sample, model.approximator, negatives);
    accumulate(*out.club);
  }
  if (terms.recon) {
    out.recon = loss_content_recon(model.decoder, encoded.sample.c, freqs);
    accumulate(*out.recon);
  }
  if (terms.style) {
    std::vector<int> labels;
    labels.reserve(batch.size());
    for (const auto& x : batch) labels.push_back(x.label);
    out.style = loss_style(model.classifier, encoded.sample.s, labels);
    accumulate(*out.style);
  }
  out.total = dis ? num::scale(*dis, beta) + out.vae.total : out.vae.total;
  check_finite(out.total, "loss_total");
  return out;
}

}  // namespace idel::model
