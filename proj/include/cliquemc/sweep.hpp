#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cliquemc/chains.hpp"
#include "cliquemc/config.hpp"

namespace cliquemc {

// Inverse temperature that may scale with the instance: either a constant
// or a multiple of ln(n). Text forms: "0.7", "ln(n)", "20*ln(n)".
struct BetaSpec {
  double constant = 0.0;
  double ln_n_coeff = 0.0;

  double value(int n) const;
  std::string label() const;
  static BetaSpec parse(const std::string& text);
};

struct ExperimentPlan {
  std::vector<int> n_values;
  std::optional<double> alpha;      // k = floor(n^alpha)
  std::optional<int> k_explicit;    // exactly one of alpha/k_explicit
  std::vector<Dynamics> dynamics;   // metropolis / greedy / simulated-tempering
  std::vector<BetaSpec> betas;      // metropolis cells only
  std::string hamiltonian = "identity";  // "identity" or comma-separated values
  std::optional<double> epsilon;    // size target parameter
  std::optional<double> gamma;      // overlap target parameter
  std::uint64_t max_steps = 0;
  int trials = 0;
  std::uint64_t master_seed = 1;
  int parallelism = 0;              // 0: hardware concurrency
  // simulated tempering extras
  std::vector<double> ladder_betas;
  std::vector<double> ladder_log_z;
  double level_move_prob = 0.5;

  static ExperimentPlan from_config(const KeyValueConfig& cfg);
  int k_for(int n) const;
  std::string canonical_string() const;
  std::uint64_t config_hash() const;
};

struct CellSpec {
  int index = 0;
  int n = 0;
  int k = 0;
  Dynamics dynamics = Dynamics::Metropolis;
  BetaSpec beta;  // unused for greedy / simulated tempering
};

std::vector<CellSpec> plan_cells(const ExperimentPlan& plan);

struct TrialRow {
  int cell = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t steps_run = 0;
  std::optional<std::uint64_t> first_hit_size;
  std::optional<std::uint64_t> first_hit_overlap;
  int final_size = 0;
  int final_overlap = 0;
  std::uint64_t removals = 0;
  int topk_overlap = 0;  // top-k-degree baseline on the same graph
};

struct CellAggregate {
  int cell = 0;
  int trials = 0;
  int hit_size_count = 0;
  int hit_overlap_count = 0;
  std::optional<double> median_hit_size_steps;     // over hits only
  std::optional<double> median_hit_overlap_steps;  // over hits only
  double mean_final_size = 0.0;
  double mean_final_overlap = 0.0;
  double mean_topk_overlap = 0.0;
  std::uint64_t removals_total = 0;
  double wall_ms = 0.0;  // informational; kept out of the result files
};

struct SweepResult {
  ExperimentPlan plan;
  std::vector<CellSpec> cells;
  std::vector<TrialRow> rows;  // sorted by (cell, trial)
  std::vector<CellAggregate> aggregates;
};

// Runs all (cell, trial) pairs. Every trial generates its own graph and
// chain from seeds derived from (master, cell, trial), so the result is
// identical at any worker count.
SweepResult run_sweep(const ExperimentPlan& plan);

void write_sweep_csv(std::ostream& os, const SweepResult& res);
void write_sweep_json(std::ostream& os, const SweepResult& res);
// Writes sweep.csv and sweep_summary.json under dir; the directory must be
// writable (probed before any compute by the CLI).
void write_sweep_files(const SweepResult& res, const std::string& dir);

}  // namespace cliquemc
