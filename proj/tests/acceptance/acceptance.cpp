// SPDX-License-Identifier: Apache-2.0
// Acceptance harness: one PASS/FAIL line per criterion, tolerances pinned
// below. `acceptance` runs all nine; `acceptance --criterion N` runs one.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "idel/cli/commands.hpp"
#include "idel/cli/config.hpp"
#include "idel/cli/metrics.hpp"
#include "idel/cli/report.hpp"
#include "idel/divergences/divergences.hpp"
#include "idel/infotheory/discrete.hpp"
#include "idel/infotheory/gaussian.hpp"
#include "idel/mibounds/estimators.hpp"
#include "support/tiny_model.hpp"

namespace {

namespace fs = std::filesystem;
using namespace idel;

// ---- pinned tolerances
constexpr double kGradTol = 1e-4;
constexpr std::size_t kGradSeeds = 50;
constexpr std::size_t kBoundBatches = 50, kBoundM = 1000, kFitSteps = 2000;
constexpr double kLearnedBelow = 0.05, kLearnedAbove = 0.5;
constexpr double kEnumTol = 1e-12;
constexpr std::size_t kMcDraws = 10'000, kMcM = 128;
constexpr double kMcSigmas = 3.0;
constexpr double kIdentityTol = 1e-10;
constexpr std::size_t kRandomJoints = 100;
constexpr double kOracleTol = 1e-12, kIdenticalTol = 1e-9;
constexpr double kChanceAcc = 50.0, kChanceBand = 10.0, kStyledAcc = 90.0, kNonStochasticBand = 0.10;
constexpr double kGmCellTol = 0.1;
const std::vector<std::uint64_t> kTrendSeeds{0, 1, 2};

// Desk configuration for the end-to-end criteria: 2 classes, V = 200,
// L = 12, 5000 sentences, 30 epochs.
constexpr const char* kDeskConfig =
    R"({"train": {"lr": 0.03, "approx_lr": 0.01, "epochs": 30}, "eval": {"bleu_max_n": 1}})";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path g_workdir;

// ------------------------------------------------------------------ 1

Outcome gradient_suite() {
  double worst = 0.0;
  std::string worst_name;
  std::size_t checks = 0;
  for (std::uint64_t seed = 0; seed < kGradSeeds; ++seed) {
    for (const auto& [name, err] : testing::tiny_gradchecks(testing::make_tiny(seed))) {
      ++checks;
      if (!(err <= worst)) {
        worst = err;
        worst_name = name;
      }
    }
  }
  return {worst < kGradTol, format("max relative error %.2e (%s) over %zu checks on %zu seeds, tolerance %.0e", worst,
                                worst_name.c_str(), checks, kGradSeeds, kGradTol)};
}

// ------------------------------------------------------------------ 2

std::pair<double, double> mean_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

Outcome club_bound() {
  bool pass = true;
  std::string detail;
  for (double rho : {0.0, 0.3, 0.5, 0.8}) {
    const info::GaussianPairSpec spec{{rho}};
    const double truth = info::gaussian_mi(spec);
    num::Rng rng(static_cast<std::uint64_t>(rho * 10), "acceptance-bound");
    const auto exact = mi::AffineGaussianConditional::from_pair_spec(spec);

    mi::CondGaussianNet net(1, 1, 32, rng);
    num::Adam adam(net.params(), {.lr = 1e-2});
    mi::fit_approximator(net, adam, info::sample_gaussian_pairs(spec, kBoundM, rng), kFitSteps);

    std::vector<double> with_exact, with_learned;
    for (std::size_t b = 0; b < kBoundBatches; ++b) {
      const auto batch = info::sample_gaussian_pairs(spec, kBoundM, rng);
      with_exact.push_back(mi::club_full(batch, exact).item());
      with_learned.push_back(mi::club_full(batch, net).item());
    }
    const auto [em, ese] = mean_se(with_exact);
    const auto [lm, lse] = mean_se(with_learned);
    const bool bound_ok = em >= truth - 2.0 * ese;
    const bool learned_ok = lm >= truth - kLearnedBelow && lm <= truth + kLearnedAbove;
    pass = pass && bound_ok && learned_ok;
    detail += format("%srho=%.1f: I=%.4f, exact-q %.4f+-%.4f %s, learned %.4f %s", detail.empty() ? "" : "; ", rho, truth,
                  em, ese, bound_ok ? "ok" : "BELOW", lm, learned_ok ? "ok" : "OUTSIDE [I-0.05, I+0.5]");
  }
  return {pass, detail};
}

// ------------------------------------------------------------------ 3

Outcome stochastic_unbiased() {
  double worst_enum = 0.0;
  for (std::size_t m = 1; m <= 4; ++m) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      num::Rng rng(seed * 10 + m, "acceptance-enum");
      mi::CondGaussianNet net(3, 2, 4, rng);
      const EmbeddingBatch batch{num::Tensor({m, 2}, rng.normals(2 * m)), num::Tensor({m, 3}, rng.normals(3 * m))};
      const double full = mi::club_full(batch, net).item();
      std::size_t total = 1;
      for (std::size_t j = 0; j < m; ++j) total *= m;
      double sum = 0.0;
      std::vector<std::size_t> neg(m);
      for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (auto& k : neg) {
          k = c % m;
          c /= m;
        }
        sum += mi::club_stochastic(batch, net, neg).item();
      }
      worst_enum = std::max(worst_enum, std::abs(sum / static_cast<double>(total) - full));
    }
  }
  num::Rng rng(128, "acceptance-mc");
  mi::CondGaussianNet net(3, 2, 8, rng);
  const EmbeddingBatch batch{num::Tensor({kMcM, 2}, rng.normals(2 * kMcM)),
                             num::Tensor({kMcM, 3}, rng.normals(3 * kMcM))};
  const double full = mi::club_full(batch, net).item();
  std::vector<double> draws(kMcDraws);
  for (auto& d : draws) d = mi::club_stochastic(batch, net, rng).item();
  const auto [mean, se] = mean_se(draws);
  const double z = std::abs(mean - full) / se;
  return {worst_enum <= kEnumTol && z <= kMcSigmas,
          format("M<=4 exhaustive max |E - full| = %.1e (tol %.0e); M=128, %zu draws: |mean - full| = %.2f SE (tol %.0f)",
              worst_enum, kEnumTol, kMcDraws, z, kMcSigmas)};
}

// ------------------------------------------------------------------ 4

std::vector<double> random_simplex(std::size_t n, num::Rng& rng, double zero_rate) {
  std::vector<double> p(n);
  double z = 0.0;
  for (auto& v : p) {
    v = rng.uniform() < zero_rate ? 0.0 : -std::log(rng.uniform());
    z += v;
  }
  if (z == 0.0) {
    p[0] = z = 1.0;
  }
  for (auto& v : p) v /= z;
  return p;
}

Outcome discrete_identities() {
  num::Rng rng(4, "acceptance-discrete");
  double worst_identity = 0.0, worst_triangle = 0.0, worst_dpi = 0.0;
  for (std::size_t t = 0; t < kRandomJoints; ++t) {
    const std::size_t nx = 2 + rng.index(3), ny = 2 + rng.index(3), nz = 2 + rng.index(3);
    const info::JointDiscrete3 j(nx, ny, nz, random_simplex(nx * ny * nz, rng, 0.15));
    worst_identity =
        std::max(worst_identity, std::abs(info::disentanglement_measure(j) - info::disentanglement_identity_form(j)));
    const double slack = info::variation_of_information(j.yz()) - info::variation_of_information(j.xy()) -
                         info::variation_of_information(j.xz());
    worst_triangle = std::max(worst_triangle, slack);

    // Markov chain s -> x -> y.
    const std::size_t ns = 2 + rng.index(4), mx = 2 + rng.index(4), my = 2 + rng.index(4);
    const auto ps = random_simplex(ns, rng, 0.0);
    std::vector<std::vector<double>> x_s(ns), y_x(mx);
    for (auto& r : x_s) r = random_simplex(mx, rng, 0.15);
    for (auto& r : y_x) r = random_simplex(my, rng, 0.15);
    std::vector<double> sx(ns * mx, 0.0), sy(ns * my, 0.0);
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t x = 0; x < mx; ++x) {
        sx[s * mx + x] = ps[s] * x_s[s][x];
        for (std::size_t y = 0; y < my; ++y) sy[s * my + y] += ps[s] * x_s[s][x] * y_x[x][y];
      }
    }
    worst_dpi = std::max(worst_dpi, info::mutual_information(info::JointDiscrete(ns, my, sy)) -
                                        info::mutual_information(info::JointDiscrete(ns, mx, sx)));
  }
  return {worst_identity <= kIdentityTol && worst_triangle <= kIdentityTol && worst_dpi <= kIdentityTol,
          format("%zu joints: two-form gap %.1e, worst triangle excess %.1e, worst DPI excess %.1e (tol %.0e)",
              kRandomJoints, worst_identity, worst_triangle, worst_dpi, kIdentityTol)};
}

// ------------------------------------------------------------------ 5

div::SampleGroup random_group(std::size_t n, std::size_t d, int label, num::Rng& rng, double shift = 0.0) {
  auto flat = rng.normals(n * d);
  for (auto& v : flat) v += shift;
  return div::SampleGroup(d, std::move(flat), label);
}

double naive_ed(const div::SampleGroup& a, const div::SampleGroup& b, const div::GroundMetric& d) {
  auto mean_pair = [&](const div::SampleGroup& u, const div::SampleGroup& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) s += d(u.point(i), v.point(j));
    return s / static_cast<double>(u.size() * v.size());
  };
  return 2.0 * mean_pair(a, b) - mean_pair(a, a) - mean_pair(b, b);
}

double naive_mmd(const div::SampleGroup& a, const div::SampleGroup& b, double w) {
  auto mean_k = [&](const div::SampleGroup& u, const div::SampleGroup& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) {
        double sq = 0.0;
        for (std::size_t k = 0; k < u.dim(); ++k) sq += std::pow(u.point(i)[k] - v.point(j)[k], 2);
        s += std::exp(-sq / (2 * w * w));
      }
    return s / static_cast<double>(u.size() * v.size());
  };
  return mean_k(a, a) + mean_k(b, b) - 2.0 * mean_k(a, b);
}

double permutation_wd(const div::SampleGroup& a, const div::SampleGroup& b, const div::GroundMetric& d) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) c += d(a.point(i), b.point(perm[i]));
    best = std::min(best, c / static_cast<double>(perm.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Outcome divergence_oracles() {
  num::Rng rng(5, "acceptance-divergence");
  double ed_gap = 0.0, mmd_gap = 0.0, wd_gap = 0.0, identical = 0.0;
  for (auto kind : {div::MetricKind::kCosine, div::MetricKind::kEuclidean}) {
    const div::GroundMetric d{kind};
    for (int t = 0; t < 5; ++t) {
      const auto a = random_group(50, 4, 0, rng), b = random_group(50, 4, 1, rng, 0.5);
      ed_gap = std::max(ed_gap, std::abs(div::energy_distance(a, b, d) - naive_ed(a, b, d)));
      for (double w : {0.5, 1.0, 3.0}) mmd_gap = std::max(mmd_gap, std::abs(div::mmd(a, b, w) - naive_mmd(a, b, w)));
      const auto row = div::label_embedding_report(a, a, d);
      identical = std::max({identical, std::abs(row.mad), std::abs(row.ed), std::abs(row.wd), std::abs(row.mmd)});
    }
    for (std::size_t n = 1; n <= 6; ++n) {
      for (int t = 0; t < 10; ++t) {
        const auto a = random_group(n, 3, 0, rng), b = random_group(n, 3, 1, rng, 0.3);
        wd_gap = std::max(wd_gap, std::abs(div::wasserstein(a, b, d) - permutation_wd(a, b, d)));
      }
    }
  }
  return {ed_gap <= kOracleTol && mmd_gap <= kOracleTol && wd_gap <= kOracleTol && identical < kIdenticalTol,
          format("ED gap %.1e, MMD gap %.1e, WD vs permutations gap %.1e (tol %.0e); identical groups max %.1e (tol %.0e)",
              ed_gap, mmd_gap, wd_gap, kOracleTol, identical, kIdenticalTol)};
}

// ------------------------------------------------------------------ 6, 7

cli::RunConfig desk_config(std::uint64_t seed, const fs::path& out) {
  auto c = cli::parse_run_config(kDeskConfig);
  c.seed = seed;
  c.out = out;
  return c;
}

void run_or_throw(std::string_view cmd, const cli::RunConfig& c) {
  std::ostringstream sink;
  if (const int code = cli::run_command(cmd, c, sink); code != cli::kExitOk) {
    throw std::runtime_error(std::string(cmd) + " exited with " + std::to_string(code));
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

// metric values (mad, ed, wd, mmd) of the content and style rows.
std::map<std::string, std::array<double, 4>> divergence_rows(const fs::path& csv) {
  std::map<std::string, std::array<double, 4>> out;
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    out[f[0]] = {std::stod(f[4]), std::stod(f[5]), std::stod(f[6]), std::stod(f[7])};
  }
  return out;
}

Outcome divergence_trend() {
  bool pass = true;
  std::string detail;
  for (auto seed : kTrendSeeds) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = g_workdir / ("c6-seed" + std::to_string(seed));
    fs::remove_all(dir);
    auto c = desk_config(seed, dir);
    c.variants = {model::Variant::kNoClub, model::Variant::kFull};
    run_or_throw("ablate", c);
    std::map<std::string, std::map<std::string, std::array<double, 4>>> rows;
    for (const char* v : {"full", "no_club"}) {
      c.model_path = dir / (std::string("model-") + v + ".idel");
      c.out = dir / v;
      run_or_throw("divergence", c);
      rows[v] = divergence_rows(c.out / "divergence.csv");
    }
    const auto& fc = rows["full"]["content"];
    const auto& fs_ = rows["full"]["style"];
    const auto& nc = rows["no_club"]["content"];
    int below = 0, style_above = 0;
    for (int k = 0; k < 4; ++k) {
      below += fc[k] < nc[k];
      style_above += fs_[k] > fc[k];
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    pass = pass && below == 4 && style_above == 4 && secs < 600.0;
    detail += format("%sseed %llu: content full<no_club %d/4, style>content %d/4 (ED %.4f vs %.4f, %.0fs)",
                  detail.empty() ? "" : "; ", static_cast<unsigned long long>(seed), below, style_above, fc[1], nc[1],
                  secs);
  }
  return {pass, detail};
}

Outcome ablation_trend() {
  std::map<std::string, std::vector<cli::ReportRow>> by_variant;
  for (auto seed : kTrendSeeds) {
    const fs::path dir = g_workdir / ("c7-seed" + std::to_string(seed));
    fs::remove_all(dir);
    run_or_throw("ablate", desk_config(seed, dir));
    for (const auto& r : cli::MetricsReport::parse_csv(slurp(dir / "report.csv")).rows) by_variant[r.variant].push_back(r);
  }
  auto mean_of = [&](const std::string& v, double cli::ReportRow::*field) {
    double s = 0.0;
    for (const auto& r : by_variant.at(v)) s += r.*field;
    return s / static_cast<double>(by_variant.at(v).size());
  };
  const double acc_vae = mean_of("vae_only", &cli::ReportRow::acc);
  const double acc_style = mean_of("vae+style", &cli::ReportRow::acc);
  const double acc_full = mean_of("full", &cli::ReportRow::acc);
  const double gm_full = mean_of("full", &cli::ReportRow::gm);
  const double gm_noclub = mean_of("no_club", &cli::ReportRow::gm);
  const double gm_ns = mean_of("full_nonstochastic", &cli::ReportRow::gm);

  const bool chance = std::abs(acc_vae - kChanceAcc) <= kChanceBand;
  const bool styled = acc_style >= kStyledAcc && acc_full >= kStyledAcc;
  const bool club_helps = gm_full > gm_noclub;
  const bool ns_close = std::abs(gm_full - gm_ns) <= kNonStochasticBand * gm_ns;
  std::string per_seed;
  for (std::size_t i = 0; i < kTrendSeeds.size(); ++i) {
    per_seed += format("%s%.2f/%.2f", i ? " " : "", by_variant["full"][i].gm, by_variant["no_club"][i].gm);
  }
  return {chance && styled && club_helps && ns_close,
          format("mean over seeds 0-2, BLEU max_n=1: ACC vae_only %.1f %s, vae+style %.1f, full %.1f %s; "
              "GM full %.2f vs no_club %.2f %s (per seed full/no_club: %s); GM full_nonstochastic %.2f %s",
              acc_vae, chance ? "ok" : "NOT CHANCE", acc_style, acc_full, styled ? "ok" : "LOW", gm_full, gm_noclub,
              club_helps ? "ok" : "NOT GREATER", per_seed.c_str(), gm_ns, ns_close ? "ok" : "OUTSIDE 10%")};
}

// ------------------------------------------------------------------ 8

Outcome gm_cells() {
  struct Cell {
    const char* where;
    std::vector<double> inputs;
    double printed;
  };
  const std::vector<Cell> cells{
      {"CtrlGen Yelp CG", {82.5, 20.8}, 41.4},        {"CtrlGen Yelp ST", {83.4, 19.4, 31.4}, 37.0},
      {"CtrlGen PC CG", {73.6, 18.9}, 37.0},          {"CtrlGen PC ST", {73.3, 18.9, 30.0}, 34.6},
      {"CAAE Yelp CG", {78.9, 19.7}, 39.4},           {"CAAE Yelp ST", {79.3, 18.5, 28.2}, 34.6},
      {"CAAE PC CG", {72.2, 19.5}, 37.5},             {"CAAE PC ST", {72.1, 18.3, 27.4}, 33.1},
      {"ARAE Yelp CG", {78.3, 23.1}, 42.4},           {"ARAE Yelp ST", {78.5, 21.3, 32.5}, 37.9},
      {"ARAE PC CG", {72.8, 22.5}, 40.4},             {"ARAE PC ST", {71.5, 20.4, 31.6}, 35.8},
      {"BT Yelp CG", {81.4, 20.2}, 40.5},             {"BT Yelp ST", {86.3, 24.1, 35.6}, 41.9},
      {"BT PC CG", {74.1, 21.0}, 39.4},               {"BT PC ST", {75.9, 23.1, 34.2}, 39.1},
      {"DRLST Yelp CG", {83.7, 22.8}, 43.7},          {"DRLST Yelp ST", {85.0, 23.9, 34.9}, 41.4},
      {"DRLST PC CG", {74.9, 22.0}, 40.5},            {"DRLST PC ST", {75.7, 21.9, 33.8}, 38.3},
      {"IDEL- Yelp CG", {78.1, 20.3}, 39.8},          {"IDEL- Yelp ST", {79.1, 20.1, 27.5}, 35.1},
      {"IDEL- PC CG", {72.0, 19.7}, 37.7},            {"IDEL- PC ST", {72.4, 19.7, 27.1}, 33.8},
      {"IDEL Yelp CG", {83.9, 23.0}, 43.9},           {"IDEL Yelp ST", {85.7, 24.3, 35.2}, 41.9},
      {"IDEL PC CG", {75.1, 22.3}, 40.9},             {"IDEL PC ST", {75.6, 23.3, 34.6}, 39.4},
      {"ablation L_VAE", {52.1, 24.7, 20.8}, 29.9},   {"ablation +I(s;y)", {86.1, 23.3, 16.4}, 32.0},
      {"ablation +I(x;c)", {50.2, 24.0, 36.3}, 34.7}, {"ablation IDEL-", {79.1, 20.1, 27.5}, 35.1},
      {"ablation IDEL*", {85.5, 24.0, 35.0}, 41.5},   {"ablation IDEL", {85.7, 24.3, 35.2}, 41.9},
  };
  std::size_t ok = 0;
  std::string off;
  for (const auto& c : cells) {
    const double gm = cli::geometric_mean(c.inputs);
    if (std::abs(gm - c.printed) <= kGmCellTol) {
      ++ok;
    } else {
      off += format("%s%s printed %.1f computed %.3f", off.empty() ? "" : ", ", c.where, c.printed, gm);
    }
  }
  const double ex1 = cli::geometric_mean(std::vector{83.9, 23.0}), ex2 = cli::geometric_mean(std::vector{85.7, 24.3, 35.2});
  return {ok == cells.size(), format("%zu/%zu printed cells within %.1f (examples 43.9 -> %.3f, 41.9 -> %.3f)%s%s", ok,
                                  cells.size(), kGmCellTol, ex1, ex2, off.empty() ? "" : "; off: ", off.c_str())};
}

// ------------------------------------------------------------------ 9

Outcome determinism() {
  std::vector<std::string> mismatches;
  std::size_t compared = 0;
  auto compare_runs = [&](std::string_view cmd, cli::RunConfig c) {
    const fs::path a = g_workdir / (std::string("c9-") + std::string(cmd) + "-a");
    const fs::path b = g_workdir / (std::string("c9-") + std::string(cmd) + "-b");
    for (const auto& dir : {a, b}) {
      fs::remove_all(dir);
      c.out = dir;
      run_or_throw(cmd, c);
    }
    for (const auto& e : fs::directory_iterator(a)) {
      ++compared;
      if (slurp(e.path()) != slurp(b / e.path().filename())) mismatches.push_back(e.path().filename().string());
    }
  };
  auto c = desk_config(9, {});
  c.train.epochs = 5;
  c.train_size = 2000;
  c.test_size = 400;
  compare_runs("train", c);
  c.mi.approximator = "learned";
  c.mi.replicates = 6;
  c.mi.fit_steps = 300;
  compare_runs("estimate-mi", c);
  std::string list;
  for (const auto& m : mismatches) list += " " + m;
  return {mismatches.empty() && compared > 0,
          format("%zu files compared across two runs of train and estimate-mi; %zu differ%s", compared, mismatches.size(),
              list.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IDEL acceptance criteria"};
  std::vector<int> only;
  std::string workdir = (fs::temp_directory_path() / "idel-acceptance").string();
  app.add_option("--criterion", only, "criteria to run (default: all)")->check(CLI::Range(1, 9));
  app.add_option("--workdir", workdir, "scratch directory for training runs");
  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::warn);
  g_workdir = workdir;
  fs::create_directories(g_workdir);

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria{
      {"gradient suite", gradient_suite, 60},
      {"CLUB upper bound", club_bound, 120},
      {"stochastic CLUB unbiased", stochastic_unbiased, 60},
      {"discrete identities", discrete_identities, 30},
      {"divergence oracles", divergence_oracles, 60},
      {"content/style divergence trend", divergence_trend, 3 * 600},
      {"ablation trend", ablation_trend, 3600},
      {"GM arithmetic", gm_cells, 1},
      {"determinism", determinism, 600},
  };
  if (only.empty()) {
    only.resize(criteria.size());
    std::iota(only.begin(), only.end(), 1);
  }
  int failures = 0;
  for (int n : only) {
    const auto& [name, fn, budget] = criteria[static_cast<std::size_t>(n - 1)];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget) {
      o.pass = false;
      o.detail += format("; over the %.0fs budget", budget);
    }
    std::printf("criterion %d (%s): %s [%.1fs] %s\n", n, name, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
