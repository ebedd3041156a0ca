// SPDX-License-Identifier: Apache-2.0
// posat-lab: experiment runner for the simulator, attack recipes, and the
// numerical toolkit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "posat/analysis.hpp"
#include "posat/experiments.hpp"
#include "posat/hashutil.hpp"
#include "posat/simnet.hpp"

namespace fs = std::filesystem;
using namespace posat;

namespace {

constexpr int kExitConfigInvalid = 2;
constexpr int kExitInvariantViolation = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw simnet::ConfigInvalid("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Content-addressed subdirectory so reruns never overwrite prior results.
fs::path run_dir(const fs::path& out_root, const std::string& config_json) {
  std::vector<std::uint8_t> bytes(config_json.begin(), config_json.end());
  const std::string h = hex(sha256(bytes)).substr(0, 12);
  return out_root / ("run-" + h);
}

int cmd_run(const std::string& config_path, const std::string& out,
            std::uint64_t seed_override, bool have_seed) {
  simnet::SimConfig cfg;
  try {
    cfg = simnet::SimConfig::from_json(read_file(config_path));
    if (have_seed) cfg.seed = seed_override;
  } catch (const simnet::ConfigInvalid& e) {
    std::cerr << "config invalid: " << e.what() << "\n";
    return kExitConfigInvalid;
  }
  const std::string config_json = cfg.to_json();
  const fs::path dir = run_dir(out, config_json);
  fs::create_directories(dir);

  const auto trace = simnet::run(cfg);
  write_file(dir / "trace.jsonl", trace.to_jsonl());

  const auto view = analysis::partition(trace);
  const auto verdict =
      analysis::check_ledger(trace, cfg.delta, cfg.duration / 2.0,
                             cfg.k_confirm);
  const bool stable = analysis::nakamoto_stability_check(view, trace);
  write_file(dir / "analysis.json",
             analysis::analysis_json(view, verdict, stable));

  const fs::path csv = fs::path(out) / "results.csv";
  const bool fresh = !fs::exists(csv);
  std::ofstream rows(csv, std::ios::app);
  if (fresh) rows << simnet::Trace::summary_csv_header() << "\n";
  rows << trace.summary_csv_row() << "\n";

  std::cout << dir.string() << "\n";
  if (!stable) {
    std::cerr << "invariant violation: nakamoto stability failed\n";
    return kExitInvariantViolation;
  }
  for (const auto& v : trace.violations) {
    // Persistence loss under an adversary strategy is an outcome, not a
    // bug; anything else is an invariant violation.
    if (v.rfind("persistence", 0) == 0 && cfg.adversary_strategy != "none")
      continue;
    std::cerr << "invariant violation: " << v << "\n";
    return kExitInvariantViolation;
  }
  return 0;
}

int cmd_analyze(const std::string& trace_path, double tau, double u) {
  const auto trace = simnet::Trace::from_jsonl(read_file(trace_path));
  const auto view = analysis::partition(trace);
  if (u <= 0.0) u = trace.config.duration / 2.0;
  const auto verdict =
      analysis::check_ledger(trace, tau, u, trace.config.k_confirm);
  const bool stable = analysis::nakamoto_stability_check(view, trace);
  std::cout << analysis::analysis_json(view, verdict, stable) << "\n";
  return stable ? 0 : kExitInvariantViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"posat-lab: proof-of-stake longest-chain laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", trace_path, attack, sweep_spec;
  std::uint64_t seed = 1;
  bool have_seed = false;
  int c_max = 10;
  int trials = 100;
  double tau = 0.0, liveness_u = 0.0;
  int sweep_c = 1;
  double beta_lo = 0.15, beta_hi = 0.40, beta_step = 0.02;
  std::string golden;

  auto* run = app.add_subcommand("run", "Execute one scenario config");
  run->add_option("config", config_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output root directory");
  run->add_option("--seed", seed, "Override the config seed")
      ->each([&](const std::string&) { have_seed = true; });

  auto* sweep = app.add_subcommand(
      "sweep", "Private-attack success over an adversary-fraction grid");
  sweep->add_option("--c", sweep_c, "Correlation parameter");
  sweep->add_option("--beta-lo", beta_lo, "Grid start");
  sweep->add_option("--beta-hi", beta_hi, "Grid end");
  sweep->add_option("--beta-step", beta_step, "Grid step");
  sweep->add_option("--trials", trials, "Trials per grid point");
  sweep->add_option("--seed", seed, "Base seed");
  sweep->add_option("--out", out_dir, "Output root directory (default stdout)");

  auto* phi = app.add_subcommand("solve-phi",
                                 "Amplification constants as CSV");
  phi->add_option("--c-max", c_max, "Largest c to solve");

  auto* rep = app.add_subcommand("reproduce", "Canned attack recipe");
  rep->add_option("attack", attack,
                  "private | costless_sim | enumeration | long_range | sybil")
      ->required();
  rep->add_option("--seed", seed, "Base seed");

  auto* ana = app.add_subcommand("analyze", "Post-hoc trace analysis");
  ana->add_option("trace", trace_path, "trace.jsonl file")->required();
  ana->add_option("--tau", tau, "Persistence parameter (seconds)");
  ana->add_option("--u", liveness_u, "Liveness parameter (seconds)");

  auto* check = app.add_subcommand("check", "Run every release gate");
  check->add_option("--seed", seed, "Base seed");
  check->add_option("--golden", golden, "Golden trace file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir, seed, have_seed);
    if (*sweep) {
      const auto res = experiments::sweep_threshold(
          sweep_c, beta_lo, beta_hi, beta_step, trials, seed);
      std::cout << res.csv();
      if (res.band_found)
        std::cout << "# transition band: [" << res.band_lo << ", "
                  << res.band_hi << "]\n";
      return 0;
    }
    if (*phi) {
      std::cout << experiments::solve_phi_csv(c_max);
      return 0;
    }
    if (*rep) {
      const auto r = experiments::reproduce(attack, seed);
      std::cout << r.name << ": " << (r.pass ? "pass" : "FAIL") << " ("
                << r.detail << ")\n";
      return r.pass ? 0 : 1;
    }
    if (*ana) return cmd_analyze(trace_path, tau, liveness_u);
    if (*check) {
      bool all = true;
      for (const auto& r : experiments::run_all(seed, golden)) {
        std::cout << (r.pass ? "pass" : "FAIL") << "  " << r.name << "  ("
                  << r.detail << ")\n";
        all = all && r.pass;
      }
      return all ? 0 : 1;
    }
  } catch (const simnet::ConfigInvalid& e) {
    std::cerr << "config invalid: " << e.what() << "\n";
    return kExitConfigInvalid;
  } catch (const experiments::UnknownAttack& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariantViolation;
  }
  return 0;
}
