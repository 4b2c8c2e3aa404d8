#include "cliquemc/chains.hpp"

#include <cmath>
#include <stdexcept>

#include "cliquemc/birth_death.hpp"

namespace cliquemc {

CliqueState make_empty_state(const PlantedGraph& g) {
  CliqueState st;
  st.members = VertexSet(g.n);
  return st;
}

CliqueState make_state(const PlantedGraph& g, const VertexSet& members) {
  if (!is_clique(g, members)) throw invalid_state("make_state: set is not a clique");
  CliqueState st;
  st.members = members;
  st.size = members.count();
  st.overlap = members.intersect_count(g.planted);
  return st;
}

bool validate_state(const PlantedGraph& g, const CliqueState& st) {
  return st.size == st.members.count() &&
         st.overlap == st.members.intersect_count(g.planted) && is_clique(g, st.members);
}

const char* dynamics_name(Dynamics d) {
  switch (d) {
    case Dynamics::Metropolis: return "metropolis";
    case Dynamics::Greedy: return "greedy";
    case Dynamics::SimulatedTempering: return "simulated-tempering";
    case Dynamics::BirthDeath1D: return "birth-death-1d";
    case Dynamics::BirthDeath2D: return "birth-death-2d";
  }
  return "?";
}

Dynamics dynamics_from_name(const std::string& name) {
  if (name == "metropolis") return Dynamics::Metropolis;
  if (name == "greedy") return Dynamics::Greedy;
  if (name == "simulated-tempering" || name == "st") return Dynamics::SimulatedTempering;
  if (name == "birth-death-1d") return Dynamics::BirthDeath1D;
  if (name == "birth-death-2d") return Dynamics::BirthDeath2D;
  throw std::invalid_argument("unknown dynamics: " + name);
}

int size_target_for(double epsilon, int n) {
  return static_cast<int>(std::ceil((1.0 + epsilon) * std::log2(static_cast<double>(n))));
}

int overlap_target_for(double gamma, int n) {
  return static_cast<int>(std::ceil(gamma * std::log2(static_cast<double>(n))));
}

namespace {

// Shared by the plain Metropolis chain and the ST level move.
StepOutcome metropolis_kernel(const PlantedGraph& g, double beta,
                              const HamiltonianSpec& h, CliqueState& st,
                              ChainRng& rng) {
  const int v = static_cast<int>(rng.proposal.below(static_cast<std::uint64_t>(g.n)));
  if (st.members.test(v)) {
    const double la = std::min(0.0, beta * (h[st.size - 1] - h[st.size]));
    if (la < 0.0 && rng.accept.uniform() >= std::exp(la)) return StepOutcome::Stay;
    st.members.reset(v);
    --st.size;
    if (g.planted.test(v)) --st.overlap;
    return StepOutcome::Remove;
  }
  if (!st.members.is_subset_of(g.row(v))) return StepOutcome::Stay;
  const double la = std::min(0.0, beta * (h[st.size + 1] - h[st.size]));
  if (la < 0.0 && rng.accept.uniform() >= std::exp(la)) return StepOutcome::Stay;
  st.members.set(v);
  ++st.size;
  if (g.planted.test(v)) ++st.overlap;
  return StepOutcome::Add;
}

#ifdef NDEBUG
constexpr std::uint64_t kValidateEvery = 1u << 16;
#else
constexpr std::uint64_t kValidateEvery = 1;
#endif

template <class StepFn>
TrajectoryRecord run_loop(const PlantedGraph& g, const CliqueState& start, int start_temp,
                          const ChainConfig& cfg, StepFn&& step) {
  if (!validate_state(g, start)) throw invalid_state("run: start is not a valid clique state");

  TrajectoryRecord rec;
  rec.seed = cfg.seed;
  CliqueState st = start;
  int temp = start_temp;

  std::uint64_t thin = cfg.thin_every;
  if (thin == 0)
    thin = cfg.max_steps <= 100000 ? 1 : (cfg.max_steps + 99999) / 100000;

  auto note_hits = [&](std::uint64_t t) {
    if (cfg.size_target && !rec.first_hit_size && st.size >= *cfg.size_target)
      rec.first_hit_size = t;
    if (cfg.overlap_target && !rec.first_hit_overlap && st.overlap >= *cfg.overlap_target)
      rec.first_hit_overlap = t;
  };
  auto should_stop = [&]() {
    return (cfg.size_target && rec.first_hit_size) ||
           (cfg.overlap_target && rec.first_hit_overlap);
  };

  ChainRng rng(cfg.seed);
  if (cfg.record_series) rec.series.push_back({0, st.size, st.overlap, temp});
  note_hits(0);

  std::uint64_t t = 0;
  if (!should_stop()) {
    for (t = 1; t <= cfg.max_steps; ++t) {
      StepOutcome out = step(st, temp, rng);
      if (out == StepOutcome::Remove) ++rec.removals_count;
      if (cfg.record_series && t % thin == 0)
        rec.series.push_back({t, st.size, st.overlap, temp});
      if (out == StepOutcome::Add || out == StepOutcome::Remove) {
        note_hits(t);
        if (should_stop()) break;
      }
      if (t % kValidateEvery == 0 && !validate_state(g, st))
        throw invalid_state("run: cached clique state diverged");
    }
    if (t > cfg.max_steps) t = cfg.max_steps;
  }

  rec.steps_run = t;
  if (cfg.record_series &&
      (rec.series.empty() || rec.series.back().step != t))
    rec.series.push_back({t, st.size, st.overlap, temp});
  rec.final_state = std::move(st);
  rec.final_temp_index = temp;
  return rec;
}

}  // namespace

StepOutcome metropolis_step(const PlantedGraph& g, const GibbsWeightContext& ctx,
                            CliqueState& st, ChainRng& rng) {
  return metropolis_kernel(g, ctx.beta, ctx.h, st, rng);
}

StepOutcome greedy_step(const PlantedGraph& g, CliqueState& st, ChainRng& rng) {
  const int v = static_cast<int>(rng.proposal.below(static_cast<std::uint64_t>(g.n)));
  if (st.members.test(v)) return StepOutcome::Stay;
  if (!st.members.is_subset_of(g.row(v))) return StepOutcome::Stay;
  st.members.set(v);
  ++st.size;
  if (g.planted.test(v)) ++st.overlap;
  return StepOutcome::Add;
}

StepOutcome st_step(const PlantedGraph& g, const HamiltonianSpec& h,
                    const TemperatureLadder& ladder, double level_move_prob,
                    StPair& state, ChainRng& rng) {
  if (rng.proposal.uniform() < level_move_prob)
    return metropolis_kernel(g, ladder.beta[state.temp], h, state.clique, rng);
  const int dir = rng.proposal.coin() ? 1 : -1;
  const int next = state.temp + dir;
  if (next < 0 || next > ladder.m()) return StepOutcome::Stay;  // off-ladder: hold
  const double la = temperature_log_acceptance(ladder, state.temp, next, h[state.clique.size]);
  if (la < 0.0 && rng.accept.uniform() >= std::exp(la)) return StepOutcome::Stay;
  state.temp = next;
  return StepOutcome::TempMove;
}

TrajectoryRecord run_metropolis(const PlantedGraph& g, const GibbsWeightContext& ctx,
                                const CliqueState& start, const ChainConfig& cfg) {
  if (cfg.dynamics != Dynamics::Metropolis)
    throw std::invalid_argument("run_metropolis: config dynamics mismatch");
  if (ctx.h.n() != g.n) throw std::invalid_argument("run_metropolis: Hamiltonian length mismatch");
  return run_loop(g, start, 0, cfg, [&](CliqueState& st, int&, ChainRng& rng) {
    return metropolis_kernel(g, ctx.beta, ctx.h, st, rng);
  });
}

TrajectoryRecord run_greedy(const PlantedGraph& g, const CliqueState& start,
                            const ChainConfig& cfg) {
  if (cfg.dynamics != Dynamics::Greedy)
    throw std::invalid_argument("run_greedy: config dynamics mismatch");
  return run_loop(g, start, 0, cfg, [&](CliqueState& st, int&, ChainRng& rng) {
    return greedy_step(g, st, rng);
  });
}

TrajectoryRecord run_simulated_tempering(const PlantedGraph& g, const HamiltonianSpec& h,
                                         const CliqueState& start, int start_temp,
                                         const ChainConfig& cfg) {
  if (cfg.dynamics != Dynamics::SimulatedTempering)
    throw std::invalid_argument("run_simulated_tempering: config dynamics mismatch");
  if (h.n() != g.n) throw std::invalid_argument("run_simulated_tempering: Hamiltonian length mismatch");
  if (cfg.ladder.beta.empty()) throw std::invalid_argument("run_simulated_tempering: empty ladder");
  if (start_temp < 0 || start_temp > cfg.ladder.m())
    throw std::invalid_argument("run_simulated_tempering: temperature index out of range");
  if (cfg.level_move_prob <= 0.0 || cfg.level_move_prob >= 1.0)
    throw std::invalid_argument("run_simulated_tempering: level move probability in (0,1) required");
  return run_loop(g, start, start_temp, cfg, [&](CliqueState& st, int& temp, ChainRng& rng) {
    StPair pair{std::move(st), temp};
    StepOutcome out = st_step(g, h, cfg.ladder, cfg.level_move_prob, pair, rng);
    st = std::move(pair.clique);
    temp = pair.temp;
    return out;
  });
}

TrajectoryRecord run_chain(const PlantedGraph& g, const HamiltonianSpec& h,
                           const CliqueState& start, const ChainConfig& cfg) {
  switch (cfg.dynamics) {
    case Dynamics::Metropolis: {
      GibbsWeightContext ctx{cfg.beta, h};
      return run_metropolis(g, ctx, start, cfg);
    }
    case Dynamics::Greedy:
      return run_greedy(g, start, cfg);
    case Dynamics::SimulatedTempering:
      return run_simulated_tempering(g, h, start, 0, cfg);
    default:
      throw std::invalid_argument("run_chain: birth-death dynamics use the dedicated runners");
  }
}

DominanceReport check_dominance(const PlantedGraph& g, const GibbsWeightContext& ctx,
                                double eta, const CliqueState& start,
                                std::uint64_t steps, std::uint64_t trials,
                                std::uint64_t seed) {
  if (!validate_state(g, start)) throw invalid_state("check_dominance: bad start state");
  BirthDeath1D bd = make_birth_death_1d(g.n, ctx, eta);
  const int n = g.n;
  const double beta = ctx.beta;
  const HamiltonianSpec& h = ctx.h;

  DominanceReport rep;
  rep.trials = trials;
  rep.steps_per_trial = steps;
  rep.x_size_occupancy.assign(g.n + 1, 0);

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, 0xd011, trial));
    CliqueState x = start;
    int y = x.size;
    bool aborted = false;

    for (std::uint64_t t = 1; t <= steps; ++t) {
      VertexSet a = common_neighbors(g, x.members);
      const int acnt = a.count();

      // The coupling needs the expansion bound at sizes below the ceiling;
      // a failure aborts the trial (reported, not a dominance violation).
      if (x.size <= bd.ceiling &&
          (20ull * static_cast<std::uint64_t>(acnt)) << x.size < static_cast<std::uint64_t>(n)) {
        ++rep.precondition_failures;
        aborted = true;
        break;
      }

      const double ad = x.size >= 1 ? std::min(1.0, std::exp(beta * (h[x.size - 1] - h[x.size]))) : 0.0;
      const double au = x.size < n ? std::min(1.0, std::exp(beta * (h[x.size + 1] - h[x.size]))) : 0.0;
      const double px_down = x.size >= 1 ? (static_cast<double>(x.size) / n) * ad : 0.0;
      const double px_up = (static_cast<double>(acnt) / n) * au;

      // Interval layout below requires the X descent and Y ascent windows
      // to be disjoint.
      if (px_down + bd.up(y) > 1.0) {
        ++rep.precondition_failures;
        aborted = true;
        break;
      }

      const double u = rng.uniform();
      auto remove_uniform_member = [&]() {
        int v = x.members.nth_set_bit(static_cast<int>(rng.below(static_cast<std::uint64_t>(x.size))));
        x.members.reset(v);
        --x.size;
        if (g.planted.test(v)) --x.overlap;
      };
      auto add_uniform_neighbor = [&]() {
        int v = a.nth_set_bit(static_cast<int>(rng.below(static_cast<std::uint64_t>(acnt))));
        x.members.set(v);
        ++x.size;
        if (g.planted.test(v)) ++x.overlap;
      };

      if (y == x.size) {
        // Extremal case: identical down probabilities, Y ascends only
        // inside the X ascent interval (enabled by the expansion bound).
        const double py_up = bd.up(y);
        if (u < px_down) {
          remove_uniform_member();
          --y;
        } else if (u < px_down + px_up) {
          const bool y_up = u < px_down + py_up;
          add_uniform_neighbor();
          if (y_up) ++y;
        }
      } else {
        const double py_down = bd.down(y);
        const double py_up = bd.up(y);
        if (u < px_down)
          remove_uniform_member();
        else if (u < px_down + px_up)
          add_uniform_neighbor();
        // Y ascent sits at the top of [0,1), disjoint from the X descent
        // interval, so Y never climbs while X drops.
        if (u < py_down)
          --y;
        else if (u >= 1.0 - py_up)
          ++y;
      }

      ++rep.checked_steps;
      ++rep.x_size_occupancy[x.size];
      if (y > x.size) ++rep.violations;
    }
    if (!aborted) ++rep.completed_trials;
  }
  return rep;
}

}  // namespace cliquemc
