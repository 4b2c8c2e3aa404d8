#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cliquemc/graph.hpp"
#include "cliquemc/hamiltonian.hpp"
#include "cliquemc/rng.hpp"

namespace cliquemc {

struct invalid_state : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Current clique with cached size and planted intersection, kept in sync
// incrementally; validate_state() recomputes both and checks cliqueness.
struct CliqueState {
  VertexSet members;
  int size = 0;
  int overlap = 0;
};

CliqueState make_empty_state(const PlantedGraph& g);
// Throws invalid_state if the set does not induce a clique.
CliqueState make_state(const PlantedGraph& g, const VertexSet& members);
bool validate_state(const PlantedGraph& g, const CliqueState& st);

enum class Dynamics {
  Metropolis,
  Greedy,
  SimulatedTempering,
  BirthDeath1D,
  BirthDeath2D,
};

const char* dynamics_name(Dynamics d);
Dynamics dynamics_from_name(const std::string& name);

struct ChainConfig {
  Dynamics dynamics = Dynamics::Metropolis;
  double beta = 0.0;                   // single-temperature chains
  TemperatureLadder ladder;            // simulated tempering / 2D walk
  double level_move_prob = 0.5;        // ST parameter a
  double eta = 0.5;                    // birth-death ceiling parameter
  std::uint64_t max_steps = 0;
  std::optional<int> size_target;      // stop at size >= target
  std::optional<int> overlap_target;   // stop at overlap >= target
  std::uint64_t seed = 1;
  std::uint64_t thin_every = 0;        // 0: every step up to 1e5, then ceil(T/1e5)
  bool record_series = true;
};

// Stop targets expressed per log2 n.
int size_target_for(double epsilon, int n);    // ceil((1+eps) * log2 n)
int overlap_target_for(double gamma, int n);   // ceil(gamma * log2 n)

struct TrajectoryPoint {
  std::uint64_t step;
  int size;
  int overlap;
  int temp_index;
};

struct TrajectoryRecord {
  std::vector<TrajectoryPoint> series;
  std::optional<std::uint64_t> first_hit_size;
  std::optional<std::uint64_t> first_hit_overlap;
  std::uint64_t removals_count = 0;
  std::uint64_t steps_run = 0;
  CliqueState final_state;
  int final_temp_index = 0;
  std::uint64_t seed = 0;
};

enum class StepOutcome { Stay, Add, Remove, TempMove };

// One kernel step: uniform vertex proposal, flip if the result is a clique,
// accept with probability min{1, pi(C')/pi(C)}.
StepOutcome metropolis_step(const PlantedGraph& g, const GibbsWeightContext& ctx,
                            CliqueState& st, ChainRng& rng);

// beta = +infinity limit of the identity-Hamiltonian chain: adds the
// proposed vertex iff the result is a clique, never removes.
StepOutcome greedy_step(const PlantedGraph& g, CliqueState& st, ChainRng& rng);

struct StPair {
  CliqueState clique;
  int temp = 0;
};

// With probability a a level move (one Metropolis proposal at beta_i),
// otherwise a temperature move to i +/- 1; off-ladder proposals rejected.
StepOutcome st_step(const PlantedGraph& g, const HamiltonianSpec& h,
                    const TemperatureLadder& ladder, double level_move_prob,
                    StPair& state, ChainRng& rng);

TrajectoryRecord run_metropolis(const PlantedGraph& g, const GibbsWeightContext& ctx,
                                const CliqueState& start, const ChainConfig& cfg);
TrajectoryRecord run_greedy(const PlantedGraph& g, const CliqueState& start,
                            const ChainConfig& cfg);
TrajectoryRecord run_simulated_tempering(const PlantedGraph& g, const HamiltonianSpec& h,
                                         const CliqueState& start, int start_temp,
                                         const ChainConfig& cfg);

// Dispatch on cfg.dynamics (clique-valued chains only).
TrajectoryRecord run_chain(const PlantedGraph& g, const HamiltonianSpec& h,
                           const CliqueState& start, const ChainConfig& cfg);

struct DominanceReport {
  std::uint64_t trials = 0;
  std::uint64_t steps_per_trial = 0;
  std::uint64_t violations = 0;
  std::uint64_t precondition_failures = 0;  // trials aborted on a failed expansion bound
  std::uint64_t completed_trials = 0;
  std::uint64_t checked_steps = 0;
  std::vector<std::uint64_t> x_size_occupancy;  // time the coupled X spends per size
};

// Coupled run of the Metropolis chain X and the 1D birth-death proxy Y from
// Y_0 = |X_0|, sharing per-step randomness so that Y never increments
// unless |X| does in the equal-size case. Counts Y_t > |X_t| events
// (expected zero) and expansion-precondition failures, which abort the
// affected trial without counting as violations.
DominanceReport check_dominance(const PlantedGraph& g, const GibbsWeightContext& ctx,
                                double eta, const CliqueState& start,
                                std::uint64_t steps, std::uint64_t trials,
                                std::uint64_t seed);

}  // namespace cliquemc
