// SPDX-License-Identifier: Apache-2.0
// idel: command-line harness. Exit codes: 0 ok, 2 config or input error,
// 3 numerical divergence.
#include <cstdlib>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "idel/cli/commands.hpp"
#include "idel/cli/config.hpp"

namespace {

// One line per subcommand, in kCommands order.
constexpr const char* kDescriptions[] = {
    "compare MI estimators on a correlated Gaussian pair",
    "train one variant (or a sweep) and write metrics and a report",
    "style and content embedding divergences between label groups",
    "write zero-noise (s, c) embeddings of the test corpus",
    "swap styles between test sentences and score the result",
    "sample sentences with one factor held fixed",
    "train every ablation variant in table order",
    "validate report.csv and render report.txt",
};
static_assert(std::size(kDescriptions) == std::size(idel::cli::kCommands));

bool setup_logging() {
  auto logger = spdlog::stderr_color_mt("idel");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("IDEL_LOG");
  const std::string level = env ? env : "info";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::error("IDEL_LOG must be error, info or debug, got '{}'", level);
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (!setup_logging()) return idel::cli::kExitInput;

  CLI::App app{"IDEL: disentangled text representations via mutual-information bounds"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> jobs;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "master seed, overrides the config");
  app.add_option("--out", out, "output directory, overrides the config");
  app.add_option("--jobs", jobs, "parallel seeds or variants")->check(CLI::PositiveNumber);
  app.require_subcommand(1);
  for (std::size_t i = 0; i < std::size(idel::cli::kCommands); ++i) {
    app.add_subcommand(std::string(idel::cli::kCommands[i]), kDescriptions[i])->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return idel::cli::kExitInput;
  }

  idel::cli::RunConfig config;
  try {
    if (!config_path.empty()) config = idel::cli::load_run_config(config_path);
    if (seed) config.seed = *seed;
    if (out) config.out = *out;
    if (jobs) config.jobs = *jobs;
    config.validate();
  } catch (const idel::cli::ConfigError& e) {
    spdlog::error("{}", e.what());
    return idel::cli::kExitInput;
  }
  return idel::cli::run_command(app.get_subcommands().front()->get_name(), config, std::cout);
}
