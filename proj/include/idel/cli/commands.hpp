// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <span>
#include <string_view>

#include "idel/cli/config.hpp"

namespace idel::cli {

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitDivergence = 3 };

inline constexpr std::string_view kCommands[] = {"estimate-mi", "train",    "divergence", "dump-embeddings",
                                                 "transfer",    "generate", "ablate",     "report"};

// Each command writes its files under config.out and a summary to `out`.
// Errors propagate as exceptions; run_command maps them to exit codes.

/// estimate_mi.csv: estimator,mean,se,replicates for true_mi, ba_lower,
/// club_full and club_stochastic.
void cmd_estimate_mi(const RunConfig& config, std::ostream& out);
/// model file, metrics.csv (flushed per epoch, so kept on divergence),
/// report.csv and report.meta.json. With sweep, one model-<v>.idel and
/// metrics-<v>.csv per variant and one report row each in table order.
void cmd_train(const RunConfig& config, std::ostream& out);
/// cmd_train with sweep forced on.
void cmd_ablate(const RunConfig& config, std::ostream& out);
/// divergence.csv: content and style rows per label pair, cosine metric.
void cmd_divergence(const RunConfig& config, std::ostream& out);
/// embeddings.jsonl: {"label", "s", "c"} per held-out sentence.
void cmd_dump_embeddings(const RunConfig& config, std::ostream& out);
/// transfer.jsonl and transfer_report.csv.
void cmd_transfer(const RunConfig& config, std::ostream& out);
/// generate.jsonl and generate_report.csv.
void cmd_generate(const RunConfig& config, std::ostream& out);
/// Re-validates report.csv and writes report.txt.
void cmd_report(const RunConfig& config, std::ostream& out);

/// Dispatches by name, logging failures; returns 0, 2 (config or input
/// error, unknown command) or 3 (numerical divergence).
int run_command(std::string_view command, const RunConfig& config, std::ostream& out);

}  // namespace idel::cli
