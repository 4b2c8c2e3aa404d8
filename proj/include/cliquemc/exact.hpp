#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cliquemc/birth_death.hpp"
#include "cliquemc/graph.hpp"
#include "cliquemc/hamiltonian.hpp"

namespace cliquemc {

struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unreachable_target : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultEnumBudget = 50'000'000ull;

// Every clique of a graph (the empty clique included), in depth-first
// extension order: each clique is extended only by higher-indexed common
// neighbors, so each one is produced exactly once.
struct StateSpaceIndex {
  int n = 0;
  int words = 0;
  int max_size = -1;  // -1: unbounded enumeration
  std::vector<std::uint64_t> bits;  // count() * words, DFS preorder
  std::vector<std::uint8_t> size;
  std::vector<std::uint8_t> overlap;
  std::vector<std::uint32_t> lex;  // lexicographic permutation for lookups

  std::size_t count() const { return size.size(); }
  bool complete() const { return max_size < 0; }
  const std::uint64_t* clique(std::size_t i) const { return bits.data() + i * words; }
  VertexSet clique_set(std::size_t i) const;
  std::optional<std::size_t> find(const std::uint64_t* c) const;
  std::optional<std::size_t> find(const VertexSet& c) const;
};

// Throws budget_exceeded once more than node_budget cliques are produced.
StateSpaceIndex enumerate_cliques(const PlantedGraph& g, int max_size = -1,
                                  std::uint64_t node_budget = kDefaultEnumBudget);

// W[q][r]: number of q-cliques with planted intersection exactly r.
struct CliqueCensus {
  int n = 0;
  int k = 0;
  std::vector<std::vector<std::uint64_t>> w;  // w[q][r], r <= min(q, k)
  std::uint64_t total = 0;
  std::uint64_t graph_fingerprint = 0;

  std::uint64_t at(int q, int r) const;
};

CliqueCensus census(const StateSpaceIndex& idx, const PlantedGraph& g);
// Streaming variant (no stored index); same table.
CliqueCensus census_stream(const PlantedGraph& g,
                           std::uint64_t node_budget = kDefaultEnumBudget);

struct PartitionFunctions {
  double log_z = 0.0;
  std::vector<double> log_z_size;        // log Z_{q,*}
  std::vector<double> log_z_overlap;     // log Z_{*,r}
  std::vector<double> log_z_overlap_le;  // log Z_{*,<=r}
};

PartitionFunctions partition_functions(const CliqueCensus& c, const GibbsWeightContext& ctx);

// log(Z_{*,r} / Z_{*,<=r}): exact conductance numerator ratio for the
// bottleneck set of cliques with planted intersection at most r.
double bottleneck_ratio_intersection(const PartitionFunctions& pf, int r);

// in[i] != 0 iff clique i is a q-gateway: some size-q clique is reachable
// from it along single-vertex flips that never drop below |C|.
std::vector<char> compute_gateways(const StateSpaceIndex& idx, const PlantedGraph& g, int q);

struct LargeCliqueBottleneck {
  double log_ratio = 0.0;  // log Z(B) - log Z(A)
  std::size_t b_count = 0;
  std::size_t a_count = 0;
  bool claim_boundary = false;       // A\B cliques have no neighbors outside A
  bool claim_q_separated = false;    // all size-q cliques lie in A^c \ B
  bool claim_overlap_covered = false;  // all intersection-r cliques lie in A^c ∪ B
  std::vector<char> in_a;
  std::vector<char> in_b;
};

// B = (Psi_q ∩ Omega_{p,<r}) ∪ Omega_{<q,r}; A = cliques reachable from the
// empty clique by paths whose interior avoids B (destinations inside B are
// collected too).
LargeCliqueBottleneck bottleneck_ratio_large_clique(const StateSpaceIndex& idx,
                                                    const PlantedGraph& g,
                                                    const GibbsWeightContext& ctx,
                                                    int q, int p, int r);

// Row-sparse transition matrix with an explicit holding-probability vector.
struct SparseMarkov {
  std::size_t states = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> col;
  std::vector<double> prob;
  std::vector<double> hold;

  struct PowerResult {
    std::vector<double> pi;
    std::size_t iterations = 0;
    bool converged = false;
  };
  PowerResult power_stationary(double tol = 1e-13, std::size_t max_iter = 2'000'000) const;
  double max_detailed_balance_residual(const std::vector<double>& pi) const;
};

SparseMarkov build_metropolis_matrix(const StateSpaceIndex& idx, const PlantedGraph& g,
                                     const GibbsWeightContext& ctx);

// Simulated tempering kernel on clique x temperature pairs; state packing
// is clique_index * (m+1) + temp.
SparseMarkov build_st_matrix(const StateSpaceIndex& idx, const PlantedGraph& g,
                             const HamiltonianSpec& h, const TemperatureLadder& ladder,
                             double level_move_prob);

// 2D birth-death kernel on the full [0,n] x [0,m] grid.
SparseMarkov build_birth_death_2d_matrix(const BirthDeath2D& bd);

struct StationaryResult {
  std::vector<double> pi_power;   // from power iteration
  std::vector<double> pi_gibbs;   // normalized exp(beta h_{|C|})
  double max_abs_diff = 0.0;
  double max_balance_residual = 0.0;  // against pi_gibbs
  std::size_t iterations = 0;
  bool converged = false;
  bool degenerate_complete_beta0 = false;
};

struct StationaryOptions {
  std::size_t max_states = 200'000;
  double tol = 1e-13;
  std::size_t max_iter = 2'000'000;
};

StationaryResult exact_stationary_and_balance(const StateSpaceIndex& idx,
                                              const PlantedGraph& g,
                                              const GibbsWeightContext& ctx,
                                              const StationaryOptions& opts = {});

// Expected steps to reach any target state, by Gauss-Seidel on
// h = 1 + P h (h = 0 on targets). Throws unreachable_target.
double expected_hitting_time(const SparseMarkov& chain, std::size_t start,
                             const std::vector<char>& target, double rel_tol = 1e-8);

double expected_hitting_time(const StateSpaceIndex& idx, const PlantedGraph& g,
                             const GibbsWeightContext& ctx, std::size_t start,
                             const std::vector<char>& target, double rel_tol = 1e-8);

}  // namespace cliquemc
