// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idel/cli/config.hpp"
#include "idel/cli/metrics.hpp"
#include "idel/model/generation.hpp"
#include "idel/model/style_classifier.hpp"
#include "idel/model/trainer.hpp"

namespace idel::cli {

/// One report line, every score in percent. gm is recomputable from the
/// row's own entries (report_gm).
struct ReportRow {
  std::string variant;
  double acc = 0.0;
  double bleu = 0.0;
  std::optional<double> self_bleu;
  double gm = 0.0;
};

/// geometric_mean of the entries, or 0 when any entry is 0.
double report_gm(std::span<const double> percents);
ReportRow make_row(std::string variant, double acc, double bleu, std::optional<double> self_bleu);

struct MetricsReport {
  std::vector<ReportRow> rows;
  bool with_self_bleu = true;
  std::size_t bleu_max_n = 4;

  /// Header then one line per row, values with 17 significant digits.
  std::string csv() const;
  /// bleu_max_n, smoothing ("none") and the GM scale.
  std::string metadata_json() const;
  /// Aligned plain-text table.
  std::string table() const;
  /// Parses csv(); throws ConfigError on malformed input or a GM that does
  /// not match its row.
  static MetricsReport parse_csv(std::string_view text);
};

/// Held-out sentences and the pretrained evaluation classifier.
struct EvalData {
  std::vector<model::LabeledSequence> test;
  model::StyleClassifier classifier;
};

std::vector<model::LabeledSequence> train_corpus(const RunConfig& config);
std::vector<model::LabeledSequence> test_corpus(const RunConfig& config);
/// Pretrains on a corpus drawn from its own sub-stream.
EvalData prepare_eval(const RunConfig& config);

struct TransferOutcome {
  /// style_source[i] is the test index whose style was applied to test[i].
  std::vector<std::size_t> style_source;
  std::vector<model::TokenList> outputs;
  ReportRow row;
};

/// Pairs each test sentence with a uniformly drawn style source (its label
/// is the target). ACC against the target; BLEU against up to
/// max_references other test sentences sharing the content source's topic
/// and the target label; self-BLEU against the content source. Bags are
/// compared as sorted token lists.
TransferOutcome evaluate_transfer(const model::TrainedModel& model, const EvalData& data, const EvalSettings& eval,
                                  std::uint64_t seed);

struct GenerationOutcome {
  std::vector<std::size_t> source;
  std::vector<model::TokenList> outputs;
  ReportRow row;
};

/// Style fixed from each of the first generate_sources test sentences,
/// content drawn from the prior. ACC against the source label, BLEU against
/// same-label test sentences; no self-BLEU.
GenerationOutcome evaluate_generation(const model::TrainedModel& model, const EvalData& data,
                                      const EvalSettings& eval, std::uint64_t seed);

}  // namespace idel::cli
