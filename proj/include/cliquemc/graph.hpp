#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cliquemc/vertex_set.hpp"

namespace cliquemc {

// G(n, 1/2) with a planted k-clique. Immutable after construction and safe
// to share read-only across threads; all queries go through the adjacency
// bit matrix (symmetric, zero diagonal).
struct PlantedGraph {
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  VertexSet planted;
  std::vector<std::uint64_t> adj;  // n rows of row_words() words each
  int row_words_ = 0;

  int row_words() const { return row_words_; }
  const std::uint64_t* row(int v) const { return adj.data() + static_cast<std::size_t>(v) * row_words_; }
  std::uint64_t* row(int v) { return adj.data() + static_cast<std::size_t>(v) * row_words_; }

  bool edge(int u, int v) const { return (row(u)[v >> 6] >> (v & 63)) & 1ull; }
  int degree(int v) const;
  std::uint64_t fingerprint() const;
};

// Samples the planted k-subset uniformly, then fills the upper triangle
// (u < v in row-major order) with one fair bit per pair and completes the
// planted pairs to edges. Same (n, k, seed) gives a bit-identical graph.
PlantedGraph generate(int n, int k, std::uint64_t seed);

// Builds a graph from an explicit edge list (test fixtures).
PlantedGraph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges, int k = 0);

// A(U) = { v not in U : U subseteq N(v) }. A(empty) = V.
VertexSet common_neighbors(const PlantedGraph& g, const VertexSet& u);

bool is_clique(const PlantedGraph& g, const VertexSet& c);

struct TopDegreeResult {
  VertexSet members;
  int overlap = 0;  // |members ∩ planted|
};

// The k highest-degree vertices, ties broken by lowest vertex index.
TopDegreeResult top_k_degrees(const PlantedGraph& g);

struct ExpansionViolation {
  std::vector<int> clique;
  int common = 0;
  double threshold = 0.0;
};

struct ExpansionReport {
  bool exhaustive = false;
  bool budget_exceeded = false;
  int ceiling = 0;  // check covers cliques of size <= ceiling
  std::uint64_t cliques_checked = 0;
  std::uint64_t violation_count = 0;
  double min_ratio = 0.0;  // min over checked C of |A(C)| * 2^|C| / n
  std::vector<ExpansionViolation> violations;  // capped sample
};

struct ExpansionOptions {
  std::uint64_t node_budget = 4'000'000'000ull;  // exhaustive DFS cap
  std::size_t max_recorded_violations = 32;
  bool stop_at_first_violation = false;
  std::uint64_t sample_seed = 1;  // sampled mode only
};

inline constexpr std::uint64_t kExhaustive = ~0ull;

// Checks |A(C)| >= n / (20 * 2^|C|) over cliques C with |C| <= (1-eta)*log2(n).
// sample_budget == kExhaustive scans every such clique (up to node_budget,
// flagged if exceeded); otherwise that many random greedy growths from the
// empty clique are checked along their whole prefix.
ExpansionReport check_expansion(const PlantedGraph& g, double eta,
                                std::uint64_t sample_budget,
                                const ExpansionOptions& opts = {});

// Text format: header line, planted vertices line, n hex rows (row words in
// little-endian order, 16 lowercase hex digits each). Round-trip bit-exact.
void write_graph(std::ostream& os, const PlantedGraph& g);
PlantedGraph read_graph(std::istream& is);
void save_graph(const std::string& path, const PlantedGraph& g);
PlantedGraph load_graph(const std::string& path);

}  // namespace cliquemc
