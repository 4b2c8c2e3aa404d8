#include "cliquemc/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cliquemc/analytics.hpp"
#include "cliquemc/birth_death.hpp"
#include "cliquemc/chains.hpp"
#include "cliquemc/exact.hpp"
#include "cliquemc/graph.hpp"
#include "cliquemc/sweep.hpp"

namespace cliquemc {

namespace {

struct GraphArgs {
  int n = 0;
  int k = 0;
  std::uint64_t seed = 1;
  std::string graph_file;

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n, "vertex count");
    cmd->add_option("--k", k, "planted clique size");
    cmd->add_option("--seed", seed, "graph seed");
    cmd->add_option("--graph", graph_file, "load a pcgraph file instead of generating");
  }

  PlantedGraph make() const {
    if (!graph_file.empty()) return load_graph(graph_file);
    if (n <= 0) throw std::invalid_argument("--n is required (or --graph)");
    return generate(n, k, seed);
  }
};

HamiltonianSpec parse_hamiltonian(const std::string& spec, int n) {
  if (spec.empty() || spec == "identity") return identity_hamiltonian(n);
  std::vector<double> values;
  std::istringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
  if (static_cast<int>(values.size()) != n + 1)
    throw std::invalid_argument("--h needs n+1 comma-separated values or 'identity'");
  auto h = custom_hamiltonian(std::move(values));
  auto reg = check_regular(h, n);
  if (!reg.regular)
    std::cerr << "note: custom h is not regular (first violating pair " << reg.first << ","
              << reg.second << ")\n";
  return h;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << "step,size,overlap,temp_index\n";
  for (const auto& p : rec.series)
    os << p.step << ',' << p.size << ',' << p.overlap << ',' << p.temp_index << '\n';
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

nlohmann::json run_summary_json(const TrajectoryRecord& rec, const std::string& config_echo) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["rng_algorithm"] = Rng::kAlgorithm;
  j["config"] = config_echo;
  j["config_hash"] = fnv1a(config_echo);
  j["seed"] = rec.seed;
  j["steps_run"] = rec.steps_run;
  if (rec.first_hit_size) j["first_hit_size"] = *rec.first_hit_size;
  else j["first_hit_size"] = nullptr;
  if (rec.first_hit_overlap) j["first_hit_overlap"] = *rec.first_hit_overlap;
  else j["first_hit_overlap"] = nullptr;
  j["removals_count"] = rec.removals_count;
  j["final_size"] = rec.final_state.size;
  j["final_overlap"] = rec.final_state.overlap;
  j["final_temp_index"] = rec.final_temp_index;
  return j;
}

int cmd_generate(const GraphArgs& ga, const std::string& out) {
  PlantedGraph g = (ga.n > 0) ? generate(ga.n, ga.k, ga.seed) : ga.make();
  if (out.empty()) {
    write_graph(std::cout, g);
  } else {
    save_graph(out, g);
    std::cout << "wrote " << out << " (n=" << g.n << " k=" << g.k << " seed=" << g.seed
              << ")\n";
  }
  return 0;
}

struct RunArgs {
  GraphArgs graph;
  std::string config_file;
  std::string dynamics = "metropolis";
  std::string beta = "0";
  std::string hamiltonian = "identity";
  std::uint64_t steps = 0;
  std::optional<double> epsilon;
  std::optional<double> gamma;
  std::optional<int> size_target;
  std::optional<int> overlap_target;
  std::uint64_t chain_seed = 1;
  std::uint64_t thin = 0;
  std::vector<double> ladder;
  std::vector<double> log_zhat;
  double level_move_prob = 0.5;
  double eta = 0.5;
  int bd_start = 0;
  int bd_start_temp = 0;
  std::string out;

  // Fills fields from a key-value config; explicitly passed flags win.
  void apply_config(const CLI::App* cmd) {
    if (config_file.empty()) return;
    KeyValueConfig cfg = KeyValueConfig::parse_file(config_file);
    if (cfg.get_int("schema_version") != 1)
      throw std::invalid_argument("run config: unsupported schema_version");
    // Read every recognized key (so the unknown-key check below stays
    // meaningful), then keep the config value only where no flag was given.
    auto take = [&](const char* flag, const char* key, auto read, auto assign) {
      if (!cfg.has(key)) return;
      auto value = read(key);
      if (cmd->count(flag) == 0) assign(value);
    };
    take("--n", "n", [&](const char* k) { return cfg.get_int(k); },
         [&](long long v) { graph.n = static_cast<int>(v); });
    take("--k", "k", [&](const char* k) { return cfg.get_int(k); },
         [&](long long v) { graph.k = static_cast<int>(v); });
    take("--seed", "seed", [&](const char* k) { return cfg.get_int(k); },
         [&](long long v) { graph.seed = static_cast<std::uint64_t>(v); });
    take("--graph", "graph", [&](const char* k) { return cfg.get_string(k); },
         [&](const std::string& v) { graph.graph_file = v; });
    take("--dynamics", "dynamics", [&](const char* k) { return cfg.get_string(k); },
         [&](const std::string& v) { dynamics = v; });
    take("--beta", "beta", [&](const char* k) { return cfg.get_string(k); },
         [&](const std::string& v) { beta = v; });
    take("--hamiltonian", "hamiltonian", [&](const char* k) { return cfg.get_string(k); },
         [&](const std::string& v) { hamiltonian = v; });
    take("--T", "max_steps", [&](const char* k) { return cfg.get_int(k); },
         [&](long long v) { steps = static_cast<std::uint64_t>(v); });
    take("--epsilon", "epsilon", [&](const char* k) { return cfg.get_double(k); },
         [&](double v) { epsilon = v; });
    take("--gamma", "gamma", [&](const char* k) { return cfg.get_double(k); },
         [&](double v) { gamma = v; });
    take("--size-target", "size_target", [&](const char* k) { return cfg.get_int(k); },
         [&](long long v) { size_target = static_cast<int>(v); });
    take("--overlap-target", "overlap_target", [&](const char* k) { return cfg.get_int(k); },
         [&](long long v) { overlap_target = static_cast<int>(v); });
    take("--chain-seed", "chain_seed", [&](const char* k) { return cfg.get_int(k); },
         [&](long long v) { chain_seed = static_cast<std::uint64_t>(v); });
    take("--thin", "thin", [&](const char* k) { return cfg.get_int(k); },
         [&](long long v) { thin = static_cast<std::uint64_t>(v); });
    take("--ladder", "ladder", [&](const char* k) { return cfg.get_double_list(k); },
         [&](const std::vector<double>& v) { ladder = v; });
    take("--log-zhat", "ladder_log_zhat", [&](const char* k) { return cfg.get_double_list(k); },
         [&](const std::vector<double>& v) { log_zhat = v; });
    take("--a", "level_move_prob", [&](const char* k) { return cfg.get_double(k); },
         [&](double v) { level_move_prob = v; });
    take("--eta", "eta", [&](const char* k) { return cfg.get_double(k); },
         [&](double v) { eta = v; });
    take("--bd-start", "bd_start", [&](const char* k) { return cfg.get_int(k); },
         [&](long long v) { bd_start = static_cast<int>(v); });
    take("--bd-start-temp", "bd_start_temp", [&](const char* k) { return cfg.get_int(k); },
         [&](long long v) { bd_start_temp = static_cast<int>(v); });
    auto unused = cfg.unused_keys();
    if (!unused.empty()) {
      std::string msg = "run config: unknown keys:";
      for (const auto& k : unused) msg += " " + k;
      throw std::invalid_argument(msg);
    }
  }
};

int cmd_run(const RunArgs& args) {
  Dynamics dyn = dynamics_from_name(args.dynamics);
  std::ostringstream echo;
  echo << "run-v1|dynamics=" << args.dynamics << "|beta=" << args.beta
       << "|h=" << args.hamiltonian << "|T=" << args.steps << "|eta=" << args.eta
       << "|chain_seed=" << args.chain_seed;

  if (dyn == Dynamics::BirthDeath1D || dyn == Dynamics::BirthDeath2D) {
    if (args.graph.n <= 0) throw std::invalid_argument("--n is required");
    int n = args.graph.n;
    HamiltonianSpec h = parse_hamiltonian(args.hamiltonian, n);
    nlohmann::json j;
    j["schema_version"] = 1;
    j["config"] = echo.str();
    j["seed"] = args.chain_seed;
    std::ostringstream csv;
    csv << "state,temp_index,visits\n";
    if (dyn == Dynamics::BirthDeath1D) {
      GibbsWeightContext ctx{BetaSpec::parse(args.beta).value(n), h};
      auto bd = make_birth_death_1d(n, ctx, args.eta);
      auto rec = run_birth_death_1d(bd, args.bd_start, args.steps, args.chain_seed, 0);
      for (int s = 0; s < static_cast<int>(rec.occupancy.size()); ++s)
        if (rec.occupancy[s]) csv << s << ",0," << rec.occupancy[s] << '\n';
      j["final_state"] = rec.final_state;
      j["steps_run"] = rec.steps;
      if (rec.first_hit_target) j["first_hit_floor"] = *rec.first_hit_target;
    } else {
      if (args.ladder.empty()) throw std::invalid_argument("--ladder is required");
      auto ladder = make_ladder(args.ladder, args.log_zhat);
      auto bd = make_birth_death_2d(n, h, ladder, args.level_move_prob, args.eta);
      auto rec = run_birth_death_2d(bd, args.bd_start, args.bd_start_temp, args.steps,
                                    args.chain_seed);
      for (int s = 0; s <= rec.n; ++s)
        for (int t = 0; t <= rec.m; ++t)
          if (rec.at(s, t)) csv << s << ',' << t << ',' << rec.at(s, t) << '\n';
      j["final_state"] = rec.final_size;
      j["final_temp_index"] = rec.final_temp;
      j["steps_run"] = rec.steps;
    }
    if (args.out.empty()) {
      std::cout << csv.str();
    } else {
      std::ofstream fc(args.out + "_occupancy.csv");
      fc << csv.str();
      std::ofstream fj(args.out + "_summary.json");
      fj << j.dump(2) << "\n";
      std::cout << "wrote " << args.out << "_occupancy.csv and _summary.json\n";
    }
    return 0;
  }

  PlantedGraph g = args.graph.make();
  HamiltonianSpec h = parse_hamiltonian(args.hamiltonian, g.n);

  ChainConfig cfg;
  cfg.dynamics = dyn;
  cfg.beta = BetaSpec::parse(args.beta).value(g.n);
  cfg.max_steps = args.steps;
  cfg.seed = args.chain_seed;
  cfg.thin_every = args.thin;
  cfg.eta = args.eta;
  cfg.size_target = args.size_target;
  cfg.overlap_target = args.overlap_target;
  if (args.epsilon) cfg.size_target = size_target_for(*args.epsilon, g.n);
  if (args.gamma) cfg.overlap_target = overlap_target_for(*args.gamma, g.n);
  if (dyn == Dynamics::SimulatedTempering) {
    cfg.ladder = make_ladder(args.ladder, args.log_zhat);
    cfg.level_move_prob = args.level_move_prob;
    if (!ladder_z_increasing(cfg.ladder))
      std::cerr << "note: ladder log Zhat values are not strictly increasing\n";
  }

  TrajectoryRecord rec = run_chain(g, h, make_empty_state(g), cfg);
  nlohmann::json j = run_summary_json(rec, echo.str());
  j["graph"] = {{"n", g.n}, {"k", g.k}, {"seed", g.seed}};

  if (args.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream fc(args.out + "_trajectory.csv");
    if (!fc) throw std::runtime_error("cannot write " + args.out + "_trajectory.csv");
    write_trajectory_csv(fc, rec);
    std::ofstream fj(args.out + "_summary.json");
    fj << j.dump(2) << "\n";
    std::cout << "wrote " << args.out << "_trajectory.csv and _summary.json\n";
  }
  return 0;
}

int cmd_census(const GraphArgs& ga, const std::string& out, std::uint64_t budget) {
  PlantedGraph g = ga.make();
  CliqueCensus c = census_stream(g, budget);
  std::ostringstream csv;
  csv << "q,r,count\n";
  for (int q = 0; q < static_cast<int>(c.w.size()); ++q)
    for (int r = 0; r < static_cast<int>(c.w[q].size()); ++r)
      if (c.w[q][r]) csv << q << ',' << r << ',' << c.w[q][r] << '\n';
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << csv.str();
    std::cout << "wrote " << out << " (total cliques " << c.total << ")\n";
  }
  return 0;
}

int cmd_bottleneck(const GraphArgs& ga, const std::string& kind, const std::string& beta,
                   const std::string& hamiltonian, int q, int p, int r,
                   std::optional<double> gamma, const std::string& out,
                   std::uint64_t budget) {
  PlantedGraph g = ga.make();
  HamiltonianSpec h = parse_hamiltonian(hamiltonian, g.n);
  GibbsWeightContext ctx{BetaSpec::parse(beta).value(g.n), h};
  nlohmann::json j;
  j["schema_version"] = 1;
  j["graph"] = {{"n", g.n}, {"k", g.k}, {"seed", g.seed}};
  j["beta"] = ctx.beta;

  if (gamma) r = static_cast<int>(std::floor(*gamma * std::log2(static_cast<double>(g.n))));
  if (kind == "intersection") {
    CliqueCensus c = census_stream(g, budget);
    PartitionFunctions pf = partition_functions(c, ctx);
    j["kind"] = "intersection";
    j["r"] = r;
    j["log_ratio"] = bottleneck_ratio_intersection(pf, r);
    j["total_cliques"] = c.total;
  } else if (kind == "large-clique") {
    StateSpaceIndex idx = enumerate_cliques(g, -1, budget);
    auto b = bottleneck_ratio_large_clique(idx, g, ctx, q, p, r);
    j["kind"] = "large-clique";
    j["q"] = q;
    j["p"] = p;
    j["r"] = r;
    j["log_ratio"] = b.log_ratio;
    j["B_size"] = b.b_count;
    j["A_size"] = b.a_count;
    j["claims_verified"] = b.claim_boundary && b.claim_q_separated && b.claim_overlap_covered;
  } else {
    throw std::invalid_argument("--kind must be intersection or large-clique");
  }

  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << j.dump(2) << "\n";
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int cmd_gateways(const GraphArgs& ga, int q, const std::string& out, std::uint64_t budget) {
  PlantedGraph g = ga.make();
  StateSpaceIndex idx = enumerate_cliques(g, -1, budget);
  auto gw = compute_gateways(idx, g, q);
  std::size_t count = 0;
  std::ostringstream csv;
  csv << "clique_index,size,overlap\n";
  for (std::size_t i = 0; i < idx.count(); ++i)
    if (gw[i]) {
      ++count;
      csv << i << ',' << static_cast<int>(idx.size[i]) << ','
          << static_cast<int>(idx.overlap[i]) << '\n';
    }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << csv.str();
  }
  std::cerr << count << " of " << idx.count() << " cliques are " << q << "-gateways\n";
  return 0;
}

int cmd_hitting_time(const GraphArgs& ga, const std::string& beta,
                     const std::string& hamiltonian, std::optional<int> target_size,
                     std::optional<int> target_overlap, std::uint64_t budget) {
  if (!target_size && !target_overlap)
    throw std::invalid_argument("one of --target-size / --target-overlap is required");
  PlantedGraph g = ga.make();
  HamiltonianSpec h = parse_hamiltonian(hamiltonian, g.n);
  GibbsWeightContext ctx{BetaSpec::parse(beta).value(g.n), h};
  StateSpaceIndex idx = enumerate_cliques(g, -1, budget);
  std::vector<char> target(idx.count(), 0);
  bool any = false;
  for (std::size_t i = 0; i < idx.count(); ++i) {
    bool hit = true;
    if (target_size && idx.size[i] < *target_size) hit = false;
    if (target_overlap && idx.overlap[i] < *target_overlap) hit = false;
    target[i] = hit;
    any |= hit;
  }
  if (!any) throw unreachable_target("hitting-time: no state meets the target");
  VertexSet empty(g.n);
  double steps = expected_hitting_time(idx, g, ctx, *idx.find(empty), target);
  nlohmann::json j;
  j["schema_version"] = 1;
  j["graph"] = {{"n", g.n}, {"k", g.k}, {"seed", g.seed}};
  j["beta"] = ctx.beta;
  if (target_size) j["target_size"] = *target_size;
  if (target_overlap) j["target_overlap"] = *target_overlap;
  j["expected_steps_from_empty"] = steps;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& fixtures) {
  if (fixtures != "small") throw std::invalid_argument("--fixtures small is the only suite");
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  // Detailed balance of the exact kernel on two fixtures.
  for (auto [n, k, seed] : {std::tuple{10, 0, 11ull}, std::tuple{12, 3, 7ull}}) {
    PlantedGraph g = generate(n, k, seed);
    StateSpaceIndex idx = enumerate_cliques(g);
    for (double beta : {0.0, 1.0}) {
      GibbsWeightContext ctx{beta, identity_hamiltonian(n)};
      auto st = exact_stationary_and_balance(idx, g, ctx);
      std::ostringstream name;
      name << "detailed-balance n=" << n << " k=" << k << " beta=" << beta;
      std::ostringstream detail;
      detail << "residual " << st.max_balance_residual;
      report(name.str(), st.max_balance_residual <= 1e-12 && st.max_abs_diff < 1e-10,
             detail.str());
    }
  }

  // Census against a full-subset brute force at n=12.
  {
    PlantedGraph g = generate(12, 3, 5);
    CliqueCensus fast = census_stream(g);
    std::uint64_t slow_total = 0;
    bool match = true;
    std::vector<std::vector<std::uint64_t>> slow(13);
    for (int q = 0; q <= 12; ++q) slow[q].assign(std::min(q, 3) + 1, 0);
    for (std::uint32_t mask = 0; mask < (1u << 12); ++mask) {
      VertexSet s(12);
      for (int v = 0; v < 12; ++v)
        if (mask & (1u << v)) s.set(v);
      if (!is_clique(g, s)) continue;
      ++slow_total;
      ++slow[s.count()][s.intersect_count(g.planted)];
    }
    for (int q = 0; q <= 12 && match; ++q)
      for (int r = 0; r < static_cast<int>(slow[q].size()); ++r)
        if (slow[q][r] != fast.at(q, r)) match = false;
    report("census brute-force n=12", match && slow_total == fast.total,
           "total " + std::to_string(fast.total));
  }

  // Dominance coupling smoke test.
  {
    PlantedGraph g = generate(64, 0, 3);
    GibbsWeightContext ctx{0.0, identity_hamiltonian(64)};
    auto rep = check_dominance(g, ctx, 0.5, make_empty_state(g), 20000, 3, 17);
    report("dominance n=64", rep.violations == 0 && rep.precondition_failures == 0,
           std::to_string(rep.checked_steps) + " coupled steps");
  }

  return failures == 0 ? 0 : 1;
}

int cmd_predict(std::optional<double> alpha, std::optional<double> rho,
                std::optional<double> gamma, std::optional<int> n, std::optional<int> k,
                int max_q, int max_r) {
  if (n && k) {
    MomentTable t = moment_table(*n, *k, max_q, max_r);
    std::cout << "n,k,q,r,log_expected\n";
    for (int q = 0; q <= max_q; ++q)
      for (int r = 0; r <= std::min({max_r, q, *k}); ++r)
        std::cout << *n << ',' << *k << ',' << q << ',' << r << ',' << t.at(q, r) << '\n';
    return 0;
  }
  if (alpha && rho && gamma) {
    std::cout << asymptotic_exponent(*alpha, *rho, *gamma) << "\n";
    return 0;
  }
  throw std::invalid_argument("predict: pass --alpha/--rho/--gamma or --n/--k [--max-q --max-r]");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"planted-clique Markov chain laboratory"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a planted-clique graph");
  GraphArgs gen_graph;
  gen_graph.attach(gen);
  std::string gen_out;
  gen->add_option("--out", gen_out, "output path (default: stdout)");

  // run
  auto* run = app.add_subcommand("run", "run one chain");
  RunArgs run_args;
  run_args.graph.attach(run);
  run->add_option("--config", run_args.config_file,
                  "key-value run config; explicit flags override its entries");
  run->add_option("--dynamics", run_args.dynamics,
                  "metropolis|greedy|simulated-tempering|birth-death-1d|birth-death-2d");
  run->add_option("--beta", run_args.beta, "inverse temperature (e.g. 0.7, ln(n), 20*ln(n))");
  run->add_option("--hamiltonian", run_args.hamiltonian, "identity or n+1 comma-separated values");
  run->add_option("--T", run_args.steps, "step budget");
  run->add_option("--epsilon", run_args.epsilon, "size target parameter");
  run->add_option("--gamma", run_args.gamma, "overlap target parameter");
  run->add_option("--size-target", run_args.size_target, "explicit size stop target");
  run->add_option("--overlap-target", run_args.overlap_target, "explicit overlap stop target");
  run->add_option("--chain-seed", run_args.chain_seed, "chain seed");
  run->add_option("--thin", run_args.thin, "trajectory thinning interval (0 = auto)");
  run->add_option("--ladder", run_args.ladder, "ST inverse temperatures")->delimiter(',');
  run->add_option("--log-zhat", run_args.log_zhat, "ST log partition estimates")->delimiter(',');
  run->add_option("--a", run_args.level_move_prob, "ST level move probability");
  run->add_option("--eta", run_args.eta, "birth-death ceiling parameter");
  run->add_option("--bd-start", run_args.bd_start, "birth-death start value");
  run->add_option("--bd-start-temp", run_args.bd_start_temp, "birth-death start temperature");
  run->add_option("--out", run_args.out, "output prefix");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run an experiment sweep");
  std::string sweep_config, sweep_out;
  int sweep_threads = 0;
  sweep->add_option("--config", sweep_config, "plan config file")->required();
  sweep->add_option("--out", sweep_out, "output directory")->required();
  sweep->add_option("--threads", sweep_threads, "worker count override");

  // census
  auto* cen = app.add_subcommand("census", "exact clique census W[q][r]");
  GraphArgs cen_graph;
  cen_graph.attach(cen);
  std::string cen_out;
  std::uint64_t cen_budget = kDefaultEnumBudget;
  cen->add_option("--out", cen_out, "output CSV path (default: stdout)");
  cen->add_option("--budget", cen_budget, "enumeration node budget");

  // bottleneck
  auto* bot = app.add_subcommand("bottleneck", "exact bottleneck ratios");
  GraphArgs bot_graph;
  bot_graph.attach(bot);
  std::string bot_kind = "intersection", bot_beta = "0", bot_h = "identity", bot_out;
  int bot_q = 0, bot_p = 0, bot_r = 0;
  std::optional<double> bot_gamma;
  std::uint64_t bot_budget = kDefaultEnumBudget;
  bot->add_option("--kind", bot_kind, "intersection|large-clique");
  bot->add_option("--beta", bot_beta, "inverse temperature");
  bot->add_option("--hamiltonian", bot_h, "Hamiltonian");
  bot->add_option("--q", bot_q, "target clique size (large-clique)");
  bot->add_option("--p", bot_p, "gateway size (large-clique)");
  bot->add_option("--r", bot_r, "intersection level");
  bot->add_option("--gamma", bot_gamma, "sets r = floor(gamma*log2 n)");
  bot->add_option("--out", bot_out, "output JSON path (default: stdout)");
  bot->add_option("--budget", bot_budget, "enumeration node budget");

  // gateways
  auto* gw = app.add_subcommand("gateways", "q-gateway cliques");
  GraphArgs gw_graph;
  gw_graph.attach(gw);
  int gw_q = 0;
  std::string gw_out;
  std::uint64_t gw_budget = kDefaultEnumBudget;
  gw->add_option("--q", gw_q, "target size")->required();
  gw->add_option("--out", gw_out, "output CSV path (default: stdout)");
  gw->add_option("--budget", gw_budget, "enumeration node budget");

  // hitting-time
  auto* hit = app.add_subcommand("hitting-time", "expected hitting time from the empty clique");
  GraphArgs hit_graph;
  hit_graph.attach(hit);
  std::string hit_beta = "0", hit_h = "identity";
  std::optional<int> hit_size, hit_overlap;
  std::uint64_t hit_budget = kDefaultEnumBudget;
  hit->add_option("--beta", hit_beta, "inverse temperature");
  hit->add_option("--hamiltonian", hit_h, "Hamiltonian");
  hit->add_option("--target-size", hit_size, "hit any clique of at least this size");
  hit->add_option("--target-overlap", hit_overlap, "hit any clique of at least this overlap");
  hit->add_option("--budget", hit_budget, "enumeration node budget");

  // verify
  auto* ver = app.add_subcommand("verify", "run the built-in invariant suites");
  std::string ver_fixtures = "small";
  ver->add_option("--fixtures", ver_fixtures, "fixture set (small)");

  // predict
  auto* pre = app.add_subcommand("predict", "closed-form predictors");
  std::optional<double> pre_alpha, pre_rho, pre_gamma;
  std::optional<int> pre_n, pre_k;
  int pre_max_q = 8, pre_max_r = 4;
  pre->add_option("--alpha", pre_alpha, "planted size exponent");
  pre->add_option("--rho", pre_rho, "clique size per log2 n");
  pre->add_option("--gamma", pre_gamma, "intersection per log2 n");
  pre->add_option("--n", pre_n, "expected-census table: n");
  pre->add_option("--k", pre_k, "expected-census table: k");
  pre->add_option("--max-q", pre_max_q, "expected-census table: max q");
  pre->add_option("--max-r", pre_max_r, "expected-census table: max r");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_graph, gen_out);
    if (run->parsed()) {
      run_args.apply_config(run);
      return cmd_run(run_args);
    }
    if (sweep->parsed()) {
      // Probe the output location before any compute.
      namespace fs = std::filesystem;
      std::error_code ec;
      fs::create_directories(sweep_out, ec);
      {
        std::ofstream probe(fs::path(sweep_out) / ".probe");
        if (!probe) throw std::runtime_error("sweep: output directory not writable: " + sweep_out);
      }
      fs::remove(fs::path(sweep_out) / ".probe", ec);
      ExperimentPlan plan = ExperimentPlan::from_config(KeyValueConfig::parse_file(sweep_config));
      if (sweep_threads > 0) plan.parallelism = sweep_threads;
      SweepResult res = run_sweep(plan);
      write_sweep_files(res, sweep_out);
      std::cout << "wrote " << sweep_out << "/sweep.csv and sweep_summary.json ("
                << res.rows.size() << " rows)\n";
      return 0;
    }
    if (cen->parsed()) return cmd_census(cen_graph, cen_out, cen_budget);
    if (bot->parsed())
      return cmd_bottleneck(bot_graph, bot_kind, bot_beta, bot_h, bot_q, bot_p, bot_r,
                            bot_gamma, bot_out, bot_budget);
    if (gw->parsed()) return cmd_gateways(gw_graph, gw_q, gw_out, gw_budget);
    if (hit->parsed())
      return cmd_hitting_time(hit_graph, hit_beta, hit_h, hit_size, hit_overlap, hit_budget);
    if (ver->parsed()) return cmd_verify(ver_fixtures);
    if (pre->parsed())
      return cmd_predict(pre_alpha, pre_rho, pre_gamma, pre_n, pre_k, pre_max_q, pre_max_r);
  } catch (const budget_exceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const unreachable_target& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace cliquemc
