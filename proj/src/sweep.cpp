#include "cliquemc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cliquemc/hamiltonian.hpp"

namespace cliquemc {

double BetaSpec::value(int n) const {
  return constant + ln_n_coeff * std::log(static_cast<double>(n));
}

namespace {
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
std::string trim_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  return format_double(v);
}
}  // namespace

std::string BetaSpec::label() const {
  if (ln_n_coeff == 0.0) return trim_number(constant);
  if (ln_n_coeff == 1.0) return "ln(n)";
  return trim_number(ln_n_coeff) + "*ln(n)";
}

BetaSpec BetaSpec::parse(const std::string& text) {
  BetaSpec spec;
  auto pos = text.find("ln(n)");
  if (pos == std::string::npos) {
    std::size_t used = 0;
    spec.constant = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("bad beta value: " + text);
    return spec;
  }
  if (pos + 5 != text.size()) throw std::invalid_argument("bad beta value: " + text);
  std::string coeff = text.substr(0, pos);
  if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
  spec.ln_n_coeff = coeff.empty() ? 1.0 : std::stod(coeff);
  return spec;
}

ExperimentPlan ExperimentPlan::from_config(const KeyValueConfig& cfg) {
  ExperimentPlan plan;
  long long schema = cfg.get_int("schema_version");
  if (schema != 1) throw std::invalid_argument("plan: unsupported schema_version");
  for (long long n : cfg.get_int_list("n")) plan.n_values.push_back(static_cast<int>(n));
  if (cfg.has("alpha") == cfg.has("k"))
    throw std::invalid_argument("plan: exactly one of 'alpha' and 'k' is required");
  if (cfg.has("alpha")) plan.alpha = cfg.get_double("alpha");
  if (cfg.has("k")) plan.k_explicit = static_cast<int>(cfg.get_int("k"));
  for (const auto& d : cfg.get_list("dynamics")) plan.dynamics.push_back(dynamics_from_name(d));
  if (cfg.has("beta"))
    for (const auto& b : cfg.get_list("beta")) plan.betas.push_back(BetaSpec::parse(b));
  plan.hamiltonian = cfg.get_string("hamiltonian", "identity");
  if (cfg.has("epsilon")) plan.epsilon = cfg.get_double("epsilon");
  if (cfg.has("gamma")) plan.gamma = cfg.get_double("gamma");
  plan.max_steps = static_cast<std::uint64_t>(cfg.get_int("max_steps"));
  plan.trials = static_cast<int>(cfg.get_int("trials"));
  plan.master_seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
  plan.parallelism = static_cast<int>(cfg.get_int("parallelism", 0));
  if (cfg.has("ladder")) plan.ladder_betas = cfg.get_double_list("ladder");
  if (cfg.has("ladder_log_zhat")) plan.ladder_log_z = cfg.get_double_list("ladder_log_zhat");
  plan.level_move_prob = cfg.get_double("level_move_prob", 0.5);

  auto unused = cfg.unused_keys();
  if (!unused.empty()) {
    std::string msg = "plan: unknown keys:";
    for (const auto& k : unused) msg += " " + k;
    throw std::invalid_argument(msg);
  }

  if (plan.n_values.empty()) throw std::invalid_argument("plan: empty n list");
  if (plan.dynamics.empty()) throw std::invalid_argument("plan: empty dynamics list");
  if (plan.trials < 0) throw std::invalid_argument("plan: negative trials");
  for (Dynamics d : plan.dynamics) {
    if (d == Dynamics::BirthDeath1D || d == Dynamics::BirthDeath2D)
      throw std::invalid_argument("plan: birth-death dynamics are not sweepable");
    if (d == Dynamics::Metropolis && plan.betas.empty())
      throw std::invalid_argument("plan: metropolis requires a beta list");
    if (d == Dynamics::SimulatedTempering &&
        (plan.ladder_betas.empty() || plan.ladder_betas.size() != plan.ladder_log_z.size()))
      throw std::invalid_argument("plan: simulated tempering requires ladder and ladder_log_zhat");
  }
  return plan;
}

int ExperimentPlan::k_for(int n) const {
  if (k_explicit) return *k_explicit;
  return static_cast<int>(std::floor(std::pow(static_cast<double>(n), *alpha)));
}

std::string ExperimentPlan::canonical_string() const {
  std::ostringstream ss;
  ss << "sweep-v1|n=";
  for (std::size_t i = 0; i < n_values.size(); ++i) ss << (i ? "," : "") << n_values[i];
  if (alpha) ss << "|alpha=" << format_double(*alpha);
  if (k_explicit) ss << "|k=" << *k_explicit;
  ss << "|dynamics=";
  for (std::size_t i = 0; i < dynamics.size(); ++i)
    ss << (i ? "," : "") << dynamics_name(dynamics[i]);
  ss << "|beta=";
  for (std::size_t i = 0; i < betas.size(); ++i) ss << (i ? "," : "") << betas[i].label();
  ss << "|h=" << hamiltonian;
  if (epsilon) ss << "|epsilon=" << format_double(*epsilon);
  if (gamma) ss << "|gamma=" << format_double(*gamma);
  ss << "|T=" << max_steps << "|trials=" << trials << "|seed=" << master_seed;
  if (!ladder_betas.empty()) {
    ss << "|ladder=";
    for (std::size_t i = 0; i < ladder_betas.size(); ++i)
      ss << (i ? "," : "") << format_double(ladder_betas[i]);
    ss << "|ladder_log_zhat=";
    for (std::size_t i = 0; i < ladder_log_z.size(); ++i)
      ss << (i ? "," : "") << format_double(ladder_log_z[i]);
    ss << "|a=" << format_double(level_move_prob);
  }
  return ss.str();
}

std::uint64_t ExperimentPlan::config_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : canonical_string()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<CellSpec> plan_cells(const ExperimentPlan& plan) {
  std::vector<CellSpec> cells;
  for (int n : plan.n_values) {
    int k = plan.k_for(n);
    if (k < 0 || k > n) throw std::invalid_argument("plan: derived k out of range");
    for (Dynamics d : plan.dynamics) {
      if (d == Dynamics::Metropolis) {
        for (const BetaSpec& b : plan.betas)
          cells.push_back({static_cast<int>(cells.size()), n, k, d, b});
      } else {
        cells.push_back({static_cast<int>(cells.size()), n, k, d, BetaSpec{}});
      }
    }
  }
  return cells;
}

namespace {

HamiltonianSpec plan_hamiltonian(const ExperimentPlan& plan, int n) {
  if (plan.hamiltonian == "identity") return identity_hamiltonian(n);
  std::vector<double> values;
  std::istringstream ss(plan.hamiltonian);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
  if (static_cast<int>(values.size()) != n + 1)
    throw std::invalid_argument("plan: custom hamiltonian needs n+1 values");
  return custom_hamiltonian(std::move(values));
}

TrialRow run_trial(const ExperimentPlan& plan, const CellSpec& cell, int trial) {
  const std::uint64_t trial_seed = derive_seed(plan.master_seed,
                                               static_cast<std::uint64_t>(cell.index),
                                               static_cast<std::uint64_t>(trial));
  const std::uint64_t graph_seed = derive_seed(trial_seed, 0x67, 0);
  const std::uint64_t chain_seed = derive_seed(trial_seed, 0x63, 0);

  PlantedGraph g = generate(cell.n, cell.k, graph_seed);
  HamiltonianSpec h = plan_hamiltonian(plan, cell.n);

  ChainConfig cfg;
  cfg.dynamics = cell.dynamics;
  cfg.beta = cell.beta.value(cell.n);
  cfg.max_steps = plan.max_steps;
  cfg.seed = chain_seed;
  cfg.record_series = false;
  if (plan.epsilon) cfg.size_target = size_target_for(*plan.epsilon, cell.n);
  if (plan.gamma) cfg.overlap_target = overlap_target_for(*plan.gamma, cell.n);
  if (cell.dynamics == Dynamics::SimulatedTempering) {
    cfg.ladder = make_ladder(plan.ladder_betas, plan.ladder_log_z);
    cfg.level_move_prob = plan.level_move_prob;
  }

  TrajectoryRecord rec = run_chain(g, h, make_empty_state(g), cfg);

  TrialRow row;
  row.cell = cell.index;
  row.trial = trial;
  row.seed = trial_seed;
  row.steps_run = rec.steps_run;
  row.first_hit_size = rec.first_hit_size;
  row.first_hit_overlap = rec.first_hit_overlap;
  row.final_size = rec.final_state.size;
  row.final_overlap = rec.final_state.overlap;
  row.removals = rec.removals_count;
  row.topk_overlap = top_k_degrees(g).overlap;
  return row;
}

std::optional<double> median_of(std::vector<double> xs) {
  if (xs.empty()) return std::nullopt;
  std::sort(xs.begin(), xs.end());
  std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

}  // namespace

SweepResult run_sweep(const ExperimentPlan& plan) {
  SweepResult res;
  res.plan = plan;
  res.cells = plan_cells(plan);

  const std::size_t total = res.cells.size() * static_cast<std::size_t>(plan.trials);
  res.rows.resize(total);
  std::vector<double> row_ms(total, 0.0);  // per-slot, no cross-thread contention

  int workers = plan.parallelism;
  if (const char* env = std::getenv("CLIQUEMC_THREADS")) workers = std::atoi(env);
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min<int>(workers, std::max<std::size_t>(total, 1));

  std::atomic<std::size_t> next{0};
  auto body = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      const CellSpec& cell = res.cells[i / plan.trials];
      int trial = static_cast<int>(i % plan.trials);
      auto t0 = std::chrono::steady_clock::now();
      res.rows[i] = run_trial(plan, cell, trial);
      auto t1 = std::chrono::steady_clock::now();
      row_ms[i] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
  };

  if (total > 0) {
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
  }

  for (const CellSpec& cell : res.cells) {
    CellAggregate agg;
    agg.cell = cell.index;
    agg.trials = plan.trials;
    std::vector<double> size_hits, overlap_hits;
    for (int t = 0; t < plan.trials; ++t) {
      const TrialRow& row = res.rows[static_cast<std::size_t>(cell.index) * plan.trials + t];
      if (row.first_hit_size) {
        ++agg.hit_size_count;
        size_hits.push_back(static_cast<double>(*row.first_hit_size));
      }
      if (row.first_hit_overlap) {
        ++agg.hit_overlap_count;
        overlap_hits.push_back(static_cast<double>(*row.first_hit_overlap));
      }
      agg.mean_final_size += row.final_size;
      agg.mean_final_overlap += row.final_overlap;
      agg.mean_topk_overlap += row.topk_overlap;
      agg.removals_total += row.removals;
    }
    if (plan.trials > 0) {
      agg.mean_final_size /= plan.trials;
      agg.mean_final_overlap /= plan.trials;
      agg.mean_topk_overlap /= plan.trials;
    }
    agg.median_hit_size_steps = median_of(std::move(size_hits));
    agg.median_hit_overlap_steps = median_of(std::move(overlap_hits));
    for (int t = 0; t < plan.trials; ++t)
      agg.wall_ms += row_ms[static_cast<std::size_t>(cell.index) * plan.trials + t];
    res.aggregates.push_back(agg);
  }
  return res;
}

void write_sweep_csv(std::ostream& os, const SweepResult& res) {
  const std::uint64_t hash = res.plan.config_hash();
  os << "cell,trial,n,k,dynamics,beta,seed,config_hash,steps_run,"
        "hit_size,first_hit_size,hit_overlap,first_hit_overlap,"
        "final_size,final_overlap,removals,topk_overlap\n";
  for (const TrialRow& row : res.rows) {
    const CellSpec& cell = res.cells[row.cell];
    os << row.cell << ',' << row.trial << ',' << cell.n << ',' << cell.k << ','
       << dynamics_name(cell.dynamics) << ','
       << (cell.dynamics == Dynamics::Metropolis ? cell.beta.label()
           : cell.dynamics == Dynamics::Greedy   ? "inf"
                                                 : "ladder")
       << ',' << row.seed << ',' << hash << ',' << row.steps_run << ','
       << (row.first_hit_size ? 1 : 0) << ',';
    if (row.first_hit_size) os << *row.first_hit_size;
    os << ',' << (row.first_hit_overlap ? 1 : 0) << ',';
    if (row.first_hit_overlap) os << *row.first_hit_overlap;
    os << ',' << row.final_size << ',' << row.final_overlap << ',' << row.removals << ','
       << row.topk_overlap << '\n';
  }
}

void write_sweep_json(std::ostream& os, const SweepResult& res) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["rng_algorithm"] = Rng::kAlgorithm;
  j["config"] = res.plan.canonical_string();
  j["config_hash"] = res.plan.config_hash();
  j["master_seed"] = res.plan.master_seed;
  nlohmann::json cells = nlohmann::json::array();
  for (const CellAggregate& agg : res.aggregates) {
    const CellSpec& cell = res.cells[agg.cell];
    nlohmann::json c;
    c["cell"] = agg.cell;
    c["n"] = cell.n;
    c["k"] = cell.k;
    c["dynamics"] = dynamics_name(cell.dynamics);
    c["beta"] = cell.dynamics == Dynamics::Metropolis ? cell.beta.label()
                : cell.dynamics == Dynamics::Greedy   ? "inf"
                                                      : "ladder";
    c["trials"] = agg.trials;
    c["hit_size_count"] = agg.hit_size_count;
    c["hit_overlap_count"] = agg.hit_overlap_count;
    if (agg.median_hit_size_steps) c["median_hit_size_steps"] = *agg.median_hit_size_steps;
    if (agg.median_hit_overlap_steps)
      c["median_hit_overlap_steps"] = *agg.median_hit_overlap_steps;
    c["mean_final_size"] = agg.mean_final_size;
    c["mean_final_overlap"] = agg.mean_final_overlap;
    c["mean_topk_overlap"] = agg.mean_topk_overlap;
    c["removals_total"] = agg.removals_total;
    cells.push_back(c);
  }
  j["cells"] = cells;
  os << j.dump(2) << "\n";
}

void write_sweep_files(const SweepResult& res, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream f(fs::path(dir) / "sweep.csv");
    if (!f) throw std::runtime_error("sweep: cannot write " + dir + "/sweep.csv");
    write_sweep_csv(f, res);
  }
  {
    std::ofstream f(fs::path(dir) / "sweep_summary.json");
    if (!f) throw std::runtime_error("sweep: cannot write " + dir + "/sweep_summary.json");
    write_sweep_json(f, res);
  }
}

}  // namespace cliquemc
