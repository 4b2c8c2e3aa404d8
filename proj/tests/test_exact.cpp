#include <doctest.h>

#include <cmath>
#include <deque>
#include <numbers>

#include "cliquemc/analytics.hpp"
#include "cliquemc/chains.hpp"
#include "cliquemc/exact.hpp"

using namespace cliquemc;

namespace {

// Independent full-subset brute force for small n.
std::vector<VertexSet> brute_force_cliques(const PlantedGraph& g) {
  std::vector<VertexSet> out;
  for (std::uint32_t mask = 0; mask < (1u << g.n); ++mask) {
    VertexSet s(g.n);
    for (int v = 0; v < g.n; ++v)
      if (mask & (1u << v)) s.set(v);
    if (is_clique(g, s)) out.push_back(s);
  }
  return out;
}

// Brute-force q-gateway decision: forward search from each clique through
// cliques of size >= |C|.
bool brute_force_gateway(const StateSpaceIndex& idx, const PlantedGraph& g, std::size_t c,
                         int q) {
  const int base = idx.size[c];
  std::vector<char> seen(idx.count(), 0);
  std::deque<std::size_t> queue{c};
  seen[c] = 1;
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    if (idx.size[i] == q) return true;
    VertexSet cur = idx.clique_set(i);
    cur.for_each([&](int v) {
      VertexSet smaller = cur;
      smaller.reset(v);
      auto j = idx.find(smaller);
      if (j && !seen[*j] && idx.size[*j] >= base) {
        seen[*j] = 1;
        queue.push_back(*j);
      }
    });
    VertexSet ext = common_neighbors(g, cur);
    ext.for_each([&](int v) {
      VertexSet larger = cur;
      larger.set(v);
      auto j = idx.find(larger);
      if (j && !seen[*j]) {
        seen[*j] = 1;
        queue.push_back(*j);
      }
    });
  }
  return false;
}

}  // namespace

TEST_CASE("clique enumeration on tiny fixtures") {
  PlantedGraph k3 = generate(3, 3, 1);
  StateSpaceIndex idx = enumerate_cliques(k3);
  CHECK(idx.count() == 8);  // all subsets of K3

  // path 0-1-2: cliques are {}, three vertices, two edges
  PlantedGraph p3 = graph_from_edges(3, {{0, 1}, {1, 2}});
  CHECK(enumerate_cliques(p3).count() == 6);

  CHECK_THROWS_AS(enumerate_cliques(k3, -1, 3), budget_exceeded);
}

TEST_CASE("enumeration matches the full-subset brute force at n=14") {
  PlantedGraph g = generate(14, 3, 77);
  StateSpaceIndex idx = enumerate_cliques(g);
  auto slow = brute_force_cliques(g);
  REQUIRE(idx.count() == slow.size());
  // every brute-force clique is findable in the index
  for (const auto& c : slow) CHECK(idx.find(c).has_value());
  // enumeration is deterministic
  StateSpaceIndex idx2 = enumerate_cliques(g);
  CHECK(idx.bits == idx2.bits);
}

TEST_CASE("size-capped enumeration") {
  PlantedGraph g = generate(12, 0, 5);
  StateSpaceIndex idx = enumerate_cliques(g, 2);
  for (std::size_t i = 0; i < idx.count(); ++i) CHECK(idx.size[i] <= 2);
  CHECK_FALSE(idx.complete());
  CHECK_THROWS_AS(census(idx, g), std::logic_error);
}

TEST_CASE("census on fixtures and against brute force") {
  PlantedGraph k4 = generate(4, 4, 2);
  CliqueCensus c = census(enumerate_cliques(k4), k4);
  CHECK(c.total == 16);
  const std::uint64_t binom[5] = {1, 4, 6, 4, 1};
  for (int q = 0; q <= 4; ++q) {
    CHECK(c.at(q, q) == binom[q]);
    for (int r = 0; r < q; ++r) CHECK(c.at(q, r) == 0);
  }

  PlantedGraph g = generate(14, 3, 99);
  CliqueCensus fast = census(enumerate_cliques(g), g);
  CliqueCensus stream = census_stream(g);
  CHECK(fast.total == stream.total);
  CHECK(fast.w == stream.w);
  auto slow = brute_force_cliques(g);
  std::vector<std::vector<std::uint64_t>> table(15, std::vector<std::uint64_t>(15, 0));
  for (const auto& s : slow) ++table[s.count()][s.intersect_count(g.planted)];
  for (int q = 0; q <= 14; ++q)
    for (int r = 0; r <= 14; ++r)
      CHECK(fast.at(q, r) == table[q][r]);

  PlantedGraph nok = generate(10, 0, 4);
  CliqueCensus c0 = census_stream(nok);
  for (int q = 0; q <= 10; ++q) CHECK(c0.at(q, 1) == 0);
}

TEST_CASE("partition functions") {
  // beta = 0: Z = number of cliques
  PlantedGraph g = generate(12, 2, 8);
  CliqueCensus c = census_stream(g);
  GibbsWeightContext flat{0.0, identity_hamiltonian(12)};
  PartitionFunctions pf = partition_functions(c, flat);
  CHECK(pf.log_z == doctest::Approx(std::log(static_cast<double>(c.total))).epsilon(1e-12));

  // K2, identity h, beta = ln 2: Z = 1 + 2*2 + 4 = 9
  PlantedGraph k2 = generate(2, 2, 1);
  GibbsWeightContext ctx{std::numbers::ln2, identity_hamiltonian(2)};
  PartitionFunctions pf2 = partition_functions(census_stream(k2), ctx);
  CHECK(std::exp(pf2.log_z) == doctest::Approx(9.0).epsilon(1e-12));

  // direct-sum oracle over the index at n=12
  StateSpaceIndex idx = enumerate_cliques(g);
  GibbsWeightContext warm{0.8, identity_hamiltonian(12)};
  PartitionFunctions pf3 = partition_functions(census(idx, g), warm);
  std::vector<double> terms;
  for (std::size_t i = 0; i < idx.count(); ++i) terms.push_back(warm.log_weight(idx.size[i]));
  CHECK(pf3.log_z == doctest::Approx(log_sum_exp(terms)).epsilon(1e-10));

  // Z_{*,<=r} accumulates
  for (int r = 1; r <= g.k; ++r) CHECK(pf3.log_z_overlap_le[r] >= pf3.log_z_overlap_le[r - 1]);
}

TEST_CASE("intersection bottleneck ratio") {
  PlantedGraph nok = generate(10, 0, 4);
  PartitionFunctions pf =
      partition_functions(census_stream(nok), GibbsWeightContext{0.0, identity_hamiltonian(10)});
  CHECK(std::isinf(bottleneck_ratio_intersection(pf, 1)));  // no overlap-1 cliques at k=0

  // complete planted tiny graph: ratio equals direct census arithmetic
  PlantedGraph k4 = generate(4, 4, 3);
  CliqueCensus c = census_stream(k4);
  GibbsWeightContext flat{0.0, identity_hamiltonian(4)};
  PartitionFunctions pf2 = partition_functions(c, flat);
  // counts with overlap exactly r: C(4,r); at most r: sum
  double exact_r2 = 6.0;           // C(4,2)
  double exact_le2 = 1 + 4 + 6.0;  // r = 0,1,2
  CHECK(bottleneck_ratio_intersection(pf2, 2) ==
        doctest::Approx(std::log(exact_r2 / exact_le2)).epsilon(1e-12));

  // weights cancel when h == 0: any beta gives the beta=0 ratio
  PlantedGraph g = generate(12, 4, 6);
  CliqueCensus cg = census_stream(g);
  HamiltonianSpec zero = custom_hamiltonian(std::vector<double>(13, 0.0));
  PartitionFunctions pfa = partition_functions(cg, GibbsWeightContext{3.7, zero});
  PartitionFunctions pfb = partition_functions(cg, GibbsWeightContext{0.0, identity_hamiltonian(12)});
  for (int r = 0; r <= 4; ++r)
    CHECK(bottleneck_ratio_intersection(pfa, r) ==
          doctest::Approx(bottleneck_ratio_intersection(pfb, r)).epsilon(1e-12));
}

TEST_CASE("gateways on fixtures and against brute force") {
  PlantedGraph k3 = generate(3, 3, 1);
  StateSpaceIndex idx3 = enumerate_cliques(k3);
  auto gw3 = compute_gateways(idx3, k3, 3);
  for (std::size_t i = 0; i < idx3.count(); ++i) CHECK(gw3[i] == 1);  // all 8

  PlantedGraph g = generate(12, 3, 123);
  StateSpaceIndex idx = enumerate_cliques(g);
  int qmax = 0;
  for (std::size_t i = 0; i < idx.count(); ++i) qmax = std::max(qmax, static_cast<int>(idx.size[i]));
  for (int q : {qmax, qmax - 1}) {
    auto gw = compute_gateways(idx, g, q);
    // every size-q clique is a q-gateway
    for (std::size_t i = 0; i < idx.count(); ++i)
      if (idx.size[i] == q) CHECK(gw[i] == 1);
    for (std::size_t i = 0; i < idx.count(); ++i)
      CHECK(static_cast<bool>(gw[i]) == brute_force_gateway(idx, g, i, q));
  }
}

TEST_CASE("large-clique bottleneck fixtures") {
  // Empty B: q beyond the maximum clique size and r beyond k.
  PlantedGraph g = generate(10, 2, 17);
  StateSpaceIndex idx = enumerate_cliques(g);
  GibbsWeightContext flat{0.0, identity_hamiltonian(10)};
  auto nothing = bottleneck_ratio_large_clique(idx, g, flat, 9, 8, 7);
  CHECK(nothing.b_count == 0);
  CHECK(nothing.a_count == idx.count());
  CHECK(std::isinf(nothing.log_ratio));
  CHECK(nothing.log_ratio < 0);

  // Hand-checkable K4 construction: B = all six edges, A = {} + singles + edges.
  PlantedGraph k4 = generate(4, 4, 5);
  StateSpaceIndex idx4 = enumerate_cliques(k4);
  GibbsWeightContext flat4{0.0, identity_hamiltonian(4)};
  auto b4 = bottleneck_ratio_large_clique(idx4, k4, flat4, 3, 2, 2);
  CHECK(b4.b_count == 6);
  CHECK(b4.a_count == 11);
  CHECK(b4.log_ratio == doctest::Approx(std::log(6.0 / 11.0)).epsilon(1e-12));
  CHECK(b4.claim_boundary);
  CHECK(b4.claim_q_separated);
  CHECK(b4.claim_overlap_covered);
}

TEST_CASE("large-clique bottleneck claims hold exhaustively at n=12") {
  PlantedGraph g = generate(12, 4, 31);
  StateSpaceIndex idx = enumerate_cliques(g);
  GibbsWeightContext ctx{0.5, identity_hamiltonian(12)};
  int qmax = 0;
  for (std::size_t i = 0; i < idx.count(); ++i) qmax = std::max(qmax, static_cast<int>(idx.size[i]));
  for (int q = 3; q <= qmax; ++q) {
    for (int p = 1; p < q; ++p) {
      for (int r = 1; r <= 3; ++r) {
        auto b = bottleneck_ratio_large_clique(idx, g, ctx, q, p, r);
        CHECK(b.claim_boundary);
        CHECK(b.claim_q_separated);
        CHECK(b.claim_overlap_covered);
      }
    }
  }
}

TEST_CASE("exact stationary distribution and reversibility") {
  // K2 at beta=0 is the degenerate complete-graph case; still uniform.
  PlantedGraph k2 = generate(2, 2, 1);
  StateSpaceIndex idx2 = enumerate_cliques(k2);
  auto st2 = exact_stationary_and_balance(idx2, k2, GibbsWeightContext{0.0, identity_hamiltonian(2)});
  CHECK(st2.degenerate_complete_beta0);
  for (double p : st2.pi_gibbs) CHECK(p == doctest::Approx(0.25));
  CHECK(st2.max_abs_diff < 1e-10);

  PlantedGraph g = generate(10, 2, 21);
  StateSpaceIndex idx = enumerate_cliques(g);
  for (double beta : {0.0, 1.0, std::log(10.0)}) {
    GibbsWeightContext ctx{beta, identity_hamiltonian(10)};
    auto st = exact_stationary_and_balance(idx, g, ctx);
    CHECK_FALSE(st.degenerate_complete_beta0);
    CHECK(st.converged);
    CHECK(st.max_abs_diff < 1e-10);
    CHECK(st.max_balance_residual <= 1e-12);
  }

  StationaryOptions tiny;
  tiny.max_states = 3;
  CHECK_THROWS_AS(exact_stationary_and_balance(idx, g, GibbsWeightContext{0.0, identity_hamiltonian(10)}, tiny),
                  std::invalid_argument);
}

TEST_CASE("simulated tempering matrix with exact Z has uniform temperature marginal") {
  PlantedGraph g = generate(9, 2, 13);
  StateSpaceIndex idx = enumerate_cliques(g);
  HamiltonianSpec h = identity_hamiltonian(9);
  std::vector<double> betas{0.0, 0.6, 1.2};
  std::vector<double> logz;
  for (double b : betas)
    logz.push_back(partition_functions(census(idx, g), GibbsWeightContext{b, h}).log_z);
  auto ladder = make_ladder(betas, logz);
  SparseMarkov st = build_st_matrix(idx, g, h, ladder, 0.5);
  auto power = st.power_stationary(1e-14, 4'000'000);
  REQUIRE(power.converged);
  const int m = ladder.m();
  for (int t = 0; t <= m; ++t) {
    double marginal = 0.0;
    for (std::size_t c = 0; c < idx.count(); ++c) marginal += power.pi[c * (m + 1) + t];
    CHECK(std::abs(marginal - 1.0 / (m + 1)) <= 1e-10);
  }
  // full closed form mu(C,i) = pi_{beta_i}(C)/(m+1)
  for (int t = 0; t <= m; ++t) {
    std::vector<double> logs(idx.count());
    for (std::size_t c = 0; c < idx.count(); ++c) logs[c] = betas[t] * h[idx.size[c]];
    double lz = log_sum_exp(logs);
    for (std::size_t c = 0; c < idx.count(); ++c) {
      double expect = std::exp(logs[c] - lz) / (m + 1);
      CHECK(power.pi[c * (m + 1) + t] == doctest::Approx(expect).epsilon(1e-6));
    }
  }
}

TEST_CASE("expected hitting times") {
  // start inside the target
  PlantedGraph g = generate(8, 0, 44);
  StateSpaceIndex idx = enumerate_cliques(g);
  GibbsWeightContext ctx{0.0, identity_hamiltonian(8)};
  std::vector<char> everything(idx.count(), 1);
  VertexSet empty(8);
  CHECK(expected_hitting_time(idx, g, ctx, *idx.find(empty), everything) == 0.0);

  // single-vertex graph with acceptance 1/2: geometric with mean 2
  PlantedGraph k1 = generate(1, 0, 1);
  StateSpaceIndex i1 = enumerate_cliques(k1);
  GibbsWeightContext half{std::numbers::ln2, custom_hamiltonian({0.0, -1.0})};
  std::vector<char> target(i1.count(), 0);
  for (std::size_t i = 0; i < i1.count(); ++i)
    if (i1.size[i] == 1) target[i] = 1;
  CHECK(expected_hitting_time(i1, k1, half, *i1.find(VertexSet(1)), target) ==
        doctest::Approx(2.0).epsilon(1e-8));

  // unreachable target mask
  std::vector<char> none(i1.count(), 0);
  CHECK_THROWS_AS(expected_hitting_time(i1, k1, half, 0, none), std::invalid_argument);
}

TEST_CASE("conductance bound holds for escape from the low-intersection set") {
  // A = { cliques with overlap <= r }, boundary B = { overlap == r }: one
  // flip changes the overlap by at most one, so exits from A pass through
  // B. The hitting bound promises a start in A whose escape probability
  // within t steps is at most t * Z_{*,r} / Z_{*,<=r}.
  PlantedGraph g = generate(12, 4, 55);
  StateSpaceIndex idx = enumerate_cliques(g);
  GibbsWeightContext ctx{0.5, identity_hamiltonian(12)};
  const int r = 3;
  const int t = 10;

  PartitionFunctions pf = partition_functions(census(idx, g), ctx);
  double bound = t * std::exp(bottleneck_ratio_intersection(pf, r));
  REQUIRE(bound < 1.0);

  // Exact escape probabilities: f_s(x) = P(stay in A for s steps | x).
  SparseMarkov p = build_metropolis_matrix(idx, g, ctx);
  std::vector<char> in_a(idx.count());
  for (std::size_t i = 0; i < idx.count(); ++i) in_a[i] = idx.overlap[i] <= r;
  std::vector<double> f(idx.count(), 1.0), next(idx.count(), 0.0);
  for (int s = 0; s < t; ++s) {
    for (std::size_t i = 0; i < idx.count(); ++i) {
      if (!in_a[i]) {
        next[i] = 0.0;
        continue;
      }
      double acc = p.hold[i] * f[i];
      for (std::size_t e = p.row_ptr[i]; e < p.row_ptr[i + 1]; ++e)
        if (in_a[p.col[e]]) acc += p.prob[e] * f[p.col[e]];
      next[i] = acc;
    }
    f.swap(next);
  }
  std::size_t worst = 0;
  double best_stay = -1.0;
  for (std::size_t i = 0; i < idx.count(); ++i)
    if (in_a[i] && f[i] > best_stay) {
      best_stay = f[i];
      worst = i;
    }
  double exact_escape = 1.0 - best_stay;
  CHECK(exact_escape <= bound + 1e-12);

  // Simulated escape frequency from that worst start.
  CliqueState start = make_state(g, idx.clique_set(worst));
  const int trials = 20000;
  int escapes = 0;
  for (int i = 0; i < trials; ++i) {
    ChainConfig cfg;
    cfg.dynamics = Dynamics::Metropolis;
    cfg.beta = ctx.beta;
    cfg.max_steps = t;
    cfg.overlap_target = r + 1;
    cfg.seed = derive_seed(4242, 0, i);
    cfg.record_series = false;
    auto rec = run_metropolis(g, ctx, start, cfg);
    if (rec.first_hit_overlap) ++escapes;
  }
  double freq = static_cast<double>(escapes) / trials;
  double sigma = std::sqrt(std::max(freq * (1.0 - freq), 1.0 / trials) / trials);
  CHECK(freq <= bound + 3.0 * sigma);
  // and the simulation agrees with the exact escape probability
  double se_exact = std::sqrt(std::max(exact_escape * (1 - exact_escape), 1.0 / trials) / trials);
  CHECK(std::abs(freq - exact_escape) <= 3.0 * se_exact + 1e-9);
}

TEST_CASE("hitting time matches Monte Carlo at n=10") {
  PlantedGraph g = generate(10, 0, 3);
  StateSpaceIndex idx = enumerate_cliques(g);
  GibbsWeightContext ctx{0.3, identity_hamiltonian(10)};
  int target_size = 3;
  std::vector<char> target(idx.count(), 0);
  for (std::size_t i = 0; i < idx.count(); ++i)
    if (idx.size[i] >= target_size) target[i] = 1;
  VertexSet empty(10);
  double exact_steps = expected_hitting_time(idx, g, ctx, *idx.find(empty), target);

  const int trials = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    ChainConfig cfg;
    cfg.dynamics = Dynamics::Metropolis;
    cfg.beta = ctx.beta;
    cfg.max_steps = 2'000'000;
    cfg.size_target = target_size;
    cfg.seed = derive_seed(909, 0, t);
    cfg.record_series = false;
    auto rec = run_metropolis(g, ctx, make_empty_state(g), cfg);
    REQUIRE(rec.first_hit_size.has_value());
    double v = static_cast<double>(*rec.first_hit_size);
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / trials;
  double se = std::sqrt((sumsq / trials - mean * mean) / trials);
  CHECK(std::abs(mean - exact_steps) <= 3.0 * se + 1e-9);
}
