#include "cliquemc/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <numeric>

namespace cliquemc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int lex_compare(const std::uint64_t* a, const std::uint64_t* b, int words) {
  for (int i = 0; i < words; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

// Depth-first extension enumeration shared by the index builder, the
// streaming census and anything else that just wants to visit cliques.
// visit(members, size, overlap) is called once per clique, empty included.
template <class Visit>
void enumerate(const PlantedGraph& g, int max_size, std::uint64_t node_budget,
               Visit&& visit) {
  const int words = g.row_words();
  struct Frame {
    VertexSet cand;  // common neighbors with index > last added vertex
    int next = 0;
  };
  VertexSet members(g.n);
  std::vector<int> chosen;
  std::uint64_t produced = 0;

  // Iterative DFS: explicit stack of candidate sets.
  std::vector<Frame> stack;
  stack.push_back({VertexSet::full(g.n), 0});
  if (++produced > node_budget) throw budget_exceeded("enumerate_cliques: node budget exceeded");
  visit(members, 0, 0);

  while (!stack.empty()) {
    Frame& f = stack.back();
    int v = -1;
    // next set bit of cand at position >= f.next
    for (int wi = f.next >> 6; wi < words; ++wi) {
      std::uint64_t w = f.cand.data()[wi];
      if (wi == (f.next >> 6) && (f.next & 63)) w &= ~0ull << (f.next & 63);
      if (w) {
        v = wi * 64 + std::countr_zero(w);
        break;
      }
    }
    if (v < 0) {
      stack.pop_back();
      if (!chosen.empty()) {
        int last = chosen.back();
        chosen.pop_back();
        members.reset(last);
      }
      continue;
    }
    f.next = v + 1;
    members.set(v);
    chosen.push_back(v);
    int sz = static_cast<int>(chosen.size());
    int ov = members.intersect_count(g.planted);
    if (++produced > node_budget) throw budget_exceeded("enumerate_cliques: node budget exceeded");
    visit(members, sz, ov);
    if (max_size < 0 || sz < max_size) {
      Frame child;
      child.cand = f.cand;
      child.cand.and_with(g.row(v));
      child.cand.clear_below(v + 1);
      child.next = v + 1;
      stack.push_back(std::move(child));
    } else {
      members.reset(v);
      chosen.pop_back();
    }
  }
}

}  // namespace

VertexSet StateSpaceIndex::clique_set(std::size_t i) const {
  VertexSet s(n);
  std::memcpy(s.data(), clique(i), static_cast<std::size_t>(words) * 8);
  return s;
}

std::optional<std::size_t> StateSpaceIndex::find(const std::uint64_t* c) const {
  std::size_t lo = 0, hi = count();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    int cmp = lex_compare(clique(lex[mid]), c, words);
    if (cmp == 0) return lex[mid];
    if (cmp < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return std::nullopt;
}

std::optional<std::size_t> StateSpaceIndex::find(const VertexSet& c) const {
  return find(c.data());
}

StateSpaceIndex enumerate_cliques(const PlantedGraph& g, int max_size,
                                  std::uint64_t node_budget) {
  if (g.n > 255)
    throw std::invalid_argument("enumerate_cliques: index supports n <= 255");
  StateSpaceIndex idx;
  idx.n = g.n;
  idx.words = g.row_words();
  idx.max_size = max_size;
  enumerate(g, max_size, node_budget, [&](const VertexSet& members, int sz, int ov) {
    const std::uint64_t* d = members.data();
    idx.bits.insert(idx.bits.end(), d, d + idx.words);
    idx.size.push_back(static_cast<std::uint8_t>(sz));
    idx.overlap.push_back(static_cast<std::uint8_t>(ov));
  });
  idx.lex.resize(idx.count());
  std::iota(idx.lex.begin(), idx.lex.end(), 0u);
  std::sort(idx.lex.begin(), idx.lex.end(), [&](std::uint32_t a, std::uint32_t b) {
    return lex_compare(idx.clique(a), idx.clique(b), idx.words) < 0;
  });
  return idx;
}

std::uint64_t CliqueCensus::at(int q, int r) const {
  if (q < 0 || q >= static_cast<int>(w.size())) return 0;
  if (r < 0 || r >= static_cast<int>(w[q].size())) return 0;
  return w[q][r];
}

static CliqueCensus make_census_shell(const PlantedGraph& g) {
  CliqueCensus c;
  c.n = g.n;
  c.k = g.k;
  c.graph_fingerprint = g.fingerprint();
  c.w.resize(g.n + 1);
  for (int q = 0; q <= g.n; ++q) c.w[q].assign(std::min(q, g.k) + 1, 0);
  return c;
}

CliqueCensus census(const StateSpaceIndex& idx, const PlantedGraph& g) {
  if (!idx.complete())
    throw std::logic_error("census: index was enumerated with a size cap");
  CliqueCensus c = make_census_shell(g);
  for (std::size_t i = 0; i < idx.count(); ++i) ++c.w[idx.size[i]][idx.overlap[i]];
  c.total = idx.count();
  return c;
}

CliqueCensus census_stream(const PlantedGraph& g, std::uint64_t node_budget) {
  CliqueCensus c = make_census_shell(g);
  std::uint64_t total = 0;
  enumerate(g, -1, node_budget, [&](const VertexSet&, int sz, int ov) {
    ++c.w[sz][ov];
    ++total;
  });
  c.total = total;
  return c;
}

PartitionFunctions partition_functions(const CliqueCensus& c, const GibbsWeightContext& ctx) {
  const int n = c.n;
  const int k = c.k;
  PartitionFunctions pf;
  pf.log_z_size.assign(n + 1, kNegInf);
  pf.log_z_overlap.assign(k + 1, kNegInf);
  pf.log_z_overlap_le.assign(k + 1, kNegInf);

  std::vector<double> terms;
  std::vector<std::vector<double>> by_r(k + 1);
  for (int q = 0; q <= n; ++q) {
    std::vector<double> row;
    for (int r = 0; r < static_cast<int>(c.w[q].size()); ++r) {
      if (c.w[q][r] == 0) continue;
      double lw = std::log(static_cast<double>(c.w[q][r])) + ctx.log_weight(q);
      row.push_back(lw);
      by_r[r].push_back(lw);
      terms.push_back(lw);
    }
    pf.log_z_size[q] = log_sum_exp(row);
  }
  pf.log_z = log_sum_exp(terms);
  std::vector<double> le_terms;
  for (int r = 0; r <= k; ++r) {
    pf.log_z_overlap[r] = log_sum_exp(by_r[r]);
    le_terms.insert(le_terms.end(), by_r[r].begin(), by_r[r].end());
    pf.log_z_overlap_le[r] = log_sum_exp(le_terms);
  }
  return pf;
}

double bottleneck_ratio_intersection(const PartitionFunctions& pf, int r) {
  if (r < 0) throw std::invalid_argument("bottleneck_ratio_intersection: negative r");
  // Beyond the planted size there are no intersection-r cliques at all.
  if (r >= static_cast<int>(pf.log_z_overlap.size())) return kNegInf;
  return pf.log_z_overlap[r] - pf.log_z_overlap_le[r];
}

namespace {

// Adjacency of the clique graph (symmetric difference exactly one vertex),
// as index lists. Removals come first, then additions.
std::vector<std::vector<std::uint32_t>> clique_adjacency(const StateSpaceIndex& idx,
                                                         const PlantedGraph& g) {
  std::vector<std::vector<std::uint32_t>> adj(idx.count());
  for (std::size_t i = 0; i < idx.count(); ++i) {
    VertexSet c = idx.clique_set(i);
    c.for_each([&](int v) {
      VertexSet smaller = c;
      smaller.reset(v);
      adj[i].push_back(static_cast<std::uint32_t>(*idx.find(smaller)));
    });
    VertexSet ext = common_neighbors(g, c);
    ext.for_each([&](int v) {
      VertexSet larger = c;
      larger.set(v);
      if (auto j = idx.find(larger)) adj[i].push_back(static_cast<std::uint32_t>(*j));
    });
  }
  return adj;
}

}  // namespace

std::vector<char> compute_gateways(const StateSpaceIndex& idx, const PlantedGraph& g, int q) {
  if (!idx.complete()) throw std::logic_error("compute_gateways: incomplete index");
  auto adj = clique_adjacency(idx, g);
  std::vector<char> gateway(idx.count(), 0);
  std::vector<char> seen(idx.count(), 0);
  std::deque<std::uint32_t> queue;

  // Reverse BFS from all size-q cliques within { size >= p }, one size
  // threshold at a time; size-p cliques reached at threshold p are exactly
  // the q-gateways of size p.
  for (int p = q; p >= 0; --p) {
    std::fill(seen.begin(), seen.end(), 0);
    queue.clear();
    for (std::size_t i = 0; i < idx.count(); ++i) {
      if (idx.size[i] == q) {
        seen[i] = 1;
        queue.push_back(static_cast<std::uint32_t>(i));
      }
    }
    while (!queue.empty()) {
      std::uint32_t i = queue.front();
      queue.pop_front();
      if (idx.size[i] == p) gateway[i] = 1;
      for (std::uint32_t j : adj[i]) {
        if (!seen[j] && idx.size[j] >= p) {
          seen[j] = 1;
          queue.push_back(j);
        }
      }
    }
  }
  return gateway;
}

LargeCliqueBottleneck bottleneck_ratio_large_clique(const StateSpaceIndex& idx,
                                                    const PlantedGraph& g,
                                                    const GibbsWeightContext& ctx,
                                                    int q, int p, int r) {
  if (!idx.complete()) throw std::logic_error("bottleneck_ratio_large_clique: incomplete index");
  if (p > q) throw std::invalid_argument("bottleneck_ratio_large_clique: require p <= q");
  auto gateway = compute_gateways(idx, g, q);
  auto adj = clique_adjacency(idx, g);

  LargeCliqueBottleneck out;
  out.in_b.assign(idx.count(), 0);
  for (std::size_t i = 0; i < idx.count(); ++i) {
    bool gw_part = gateway[i] && idx.size[i] == p && idx.overlap[i] < r;
    bool ov_part = idx.size[i] < q && idx.overlap[i] == r;
    out.in_b[i] = gw_part || ov_part;
  }

  // BFS from the empty clique; members of B are collected but not expanded.
  out.in_a.assign(idx.count(), 0);
  VertexSet empty(g.n);
  std::size_t empty_idx = *idx.find(empty);
  std::deque<std::uint32_t> queue;
  out.in_a[empty_idx] = 1;
  if (!out.in_b[empty_idx]) queue.push_back(static_cast<std::uint32_t>(empty_idx));
  while (!queue.empty()) {
    std::uint32_t i = queue.front();
    queue.pop_front();
    for (std::uint32_t j : adj[i]) {
      if (out.in_a[j]) continue;
      out.in_a[j] = 1;
      if (!out.in_b[j]) queue.push_back(j);
    }
  }

  std::vector<double> b_terms, a_terms;
  for (std::size_t i = 0; i < idx.count(); ++i) {
    if (out.in_b[i]) {
      ++out.b_count;
      b_terms.push_back(ctx.log_weight(idx.size[i]));
    }
    if (out.in_a[i]) {
      ++out.a_count;
      a_terms.push_back(ctx.log_weight(idx.size[i]));
    }
  }
  out.log_ratio = log_sum_exp(b_terms) - log_sum_exp(a_terms);

  // Claim checks on the instance.
  out.claim_boundary = true;
  for (std::size_t i = 0; i < idx.count() && out.claim_boundary; ++i) {
    if (!out.in_a[i] || out.in_b[i]) continue;
    for (std::uint32_t j : adj[i])
      if (!out.in_a[j]) {
        out.claim_boundary = false;
        break;
      }
  }
  out.claim_q_separated = true;
  out.claim_overlap_covered = true;
  for (std::size_t i = 0; i < idx.count(); ++i) {
    if (idx.size[i] == q && (out.in_a[i] || out.in_b[i])) out.claim_q_separated = false;
    if (idx.overlap[i] == r && out.in_a[i] && !out.in_b[i]) out.claim_overlap_covered = false;
  }
  return out;
}

SparseMarkov::PowerResult SparseMarkov::power_stationary(double tol,
                                                         std::size_t max_iter) const {
  PowerResult res;
  std::vector<double> x(states, 1.0 / static_cast<double>(states));
  std::vector<double> y(states, 0.0);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < states; ++i) y[i] = x[i] * hold[i];
    for (std::size_t i = 0; i < states; ++i) {
      const double xi = x[i];
      for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) y[col[e]] += xi * prob[e];
    }
    double diff = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < states; ++i) {
      diff += std::abs(y[i] - x[i]);
      sum += y[i];
    }
    for (auto& v : y) v /= sum;  // counteract rounding drift
    x.swap(y);
    if (diff <= tol) {
      res.converged = true;
      res.iterations = it;
      break;
    }
    res.iterations = it;
  }
  res.pi = std::move(x);
  return res;
}

double SparseMarkov::max_detailed_balance_residual(const std::vector<double>& pi) const {
  // Flows on the off-diagonal entries; holding mass is trivially balanced.
  double worst = 0.0;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> flow(states);
  for (std::size_t i = 0; i < states; ++i)
    for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e)
      flow[i].push_back({col[e], pi[i] * prob[e]});
  for (auto& f : flow) std::sort(f.begin(), f.end());
  for (std::size_t i = 0; i < states; ++i) {
    for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
      std::uint32_t j = col[e];
      double fwd = pi[i] * prob[e];
      double bwd = 0.0;
      auto it = std::lower_bound(flow[j].begin(), flow[j].end(),
                                 std::make_pair(static_cast<std::uint32_t>(i), -1.0));
      if (it != flow[j].end() && it->first == i) bwd = it->second;
      worst = std::max(worst, std::abs(fwd - bwd));
    }
  }
  return worst;
}

SparseMarkov build_metropolis_matrix(const StateSpaceIndex& idx, const PlantedGraph& g,
                                     const GibbsWeightContext& ctx) {
  if (!idx.complete()) throw std::logic_error("build_metropolis_matrix: incomplete index");
  SparseMarkov m;
  m.states = idx.count();
  m.row_ptr.assign(m.states + 1, 0);
  m.hold.assign(m.states, 0.0);
  const double inv_n = 1.0 / static_cast<double>(g.n);

  auto adj = clique_adjacency(idx, g);
  for (std::size_t i = 0; i < m.states; ++i) m.row_ptr[i + 1] = m.row_ptr[i] + adj[i].size();
  m.col.resize(m.row_ptr.back());
  m.prob.resize(m.row_ptr.back());
  for (std::size_t i = 0; i < m.states; ++i) {
    double out = 0.0;
    std::size_t e = m.row_ptr[i];
    for (std::uint32_t j : adj[i]) {
      double la = std::min(0.0, ctx.beta * (ctx.h[idx.size[j]] - ctx.h[idx.size[i]]));
      double pij = inv_n * std::exp(la);
      m.col[e] = j;
      m.prob[e] = pij;
      out += pij;
      ++e;
    }
    m.hold[i] = 1.0 - out;
  }
  return m;
}

SparseMarkov build_st_matrix(const StateSpaceIndex& idx, const PlantedGraph& g,
                             const HamiltonianSpec& h, const TemperatureLadder& ladder,
                             double level_move_prob) {
  if (!idx.complete()) throw std::logic_error("build_st_matrix: incomplete index");
  const int m_temps = ladder.m() + 1;
  const double a = level_move_prob;
  auto adj = clique_adjacency(idx, g);

  SparseMarkov m;
  m.states = idx.count() * m_temps;
  m.row_ptr.assign(m.states + 1, 0);
  m.hold.assign(m.states, 0.0);
  for (std::size_t c = 0; c < idx.count(); ++c)
    for (int t = 0; t < m_temps; ++t) {
      std::size_t s = c * m_temps + t;
      std::size_t deg = adj[c].size() + (t > 0 ? 1 : 0) + (t + 1 < m_temps ? 1 : 0);
      m.row_ptr[s + 1] = deg;
    }
  for (std::size_t s = 0; s < m.states; ++s) m.row_ptr[s + 1] += m.row_ptr[s];
  m.col.resize(m.row_ptr.back());
  m.prob.resize(m.row_ptr.back());

  const double inv_n = 1.0 / static_cast<double>(g.n);
  for (std::size_t c = 0; c < idx.count(); ++c) {
    for (int t = 0; t < m_temps; ++t) {
      std::size_t s = c * m_temps + t;
      std::size_t e = m.row_ptr[s];
      double out = 0.0;
      for (std::uint32_t j : adj[c]) {
        double la = std::min(0.0, ladder.beta[t] * (h[idx.size[j]] - h[idx.size[c]]));
        double pij = a * inv_n * std::exp(la);
        m.col[e] = static_cast<std::uint32_t>(j * m_temps + t);
        m.prob[e] = pij;
        out += pij;
        ++e;
      }
      for (int dt : {-1, +1}) {
        int t2 = t + dt;
        if (t2 < 0 || t2 >= m_temps) continue;
        double la = temperature_log_acceptance(ladder, t, t2, h[idx.size[c]]);
        double pij = (1.0 - a) / 2.0 * std::exp(la);
        m.col[e] = static_cast<std::uint32_t>(c * m_temps + t2);
        m.prob[e] = pij;
        out += pij;
        ++e;
      }
      m.hold[s] = 1.0 - out;
    }
  }
  return m;
}

SparseMarkov build_birth_death_2d_matrix(const BirthDeath2D& bd) {
  const int cols = bd.m() + 1;
  SparseMarkov m;
  m.states = static_cast<std::size_t>(bd.n + 1) * cols;
  m.row_ptr.assign(m.states + 1, 0);
  m.hold.assign(m.states, 0.0);
  std::vector<std::uint32_t> col;
  std::vector<double> prob;
  for (int s = 0; s <= bd.n; ++s) {
    for (int j = 0; j < cols; ++j) {
      std::size_t state = static_cast<std::size_t>(s) * cols + j;
      double out = 0.0;
      auto push = [&](int s2, int j2, double p) {
        if (p <= 0.0) return;
        col.push_back(static_cast<std::uint32_t>(static_cast<std::size_t>(s2) * cols + j2));
        prob.push_back(p);
        out += p;
      };
      if (s > 0) push(s - 1, j, bd.size_down(s, j));
      if (s < bd.n) push(s + 1, j, bd.size_up(s, j));
      if (j > 0) push(s, j - 1, bd.temp_move(s, j, j - 1));
      if (j < cols - 1) push(s, j + 1, bd.temp_move(s, j, j + 1));
      m.row_ptr[state + 1] = col.size();
      m.hold[state] = 1.0 - out;
    }
  }
  m.col = std::move(col);
  m.prob = std::move(prob);
  return m;
}

StationaryResult exact_stationary_and_balance(const StateSpaceIndex& idx,
                                              const PlantedGraph& g,
                                              const GibbsWeightContext& ctx,
                                              const StationaryOptions& opts) {
  if (idx.count() > opts.max_states)
    throw std::invalid_argument("exact_stationary_and_balance: state space exceeds limit");
  StationaryResult res;

  bool complete_graph = true;
  for (int u = 0; u < g.n && complete_graph; ++u)
    for (int v = u + 1; v < g.n; ++v)
      if (!g.edge(u, v)) {
        complete_graph = false;
        break;
      }
  res.degenerate_complete_beta0 = complete_graph && ctx.beta == 0.0;

  SparseMarkov p = build_metropolis_matrix(idx, g, ctx);
  auto power = p.power_stationary(opts.tol, opts.max_iter);
  res.pi_power = std::move(power.pi);
  res.iterations = power.iterations;
  res.converged = power.converged;

  std::vector<double> logs(idx.count());
  for (std::size_t i = 0; i < idx.count(); ++i) logs[i] = ctx.log_weight(idx.size[i]);
  double lz = log_sum_exp(logs);
  res.pi_gibbs.resize(idx.count());
  for (std::size_t i = 0; i < idx.count(); ++i) res.pi_gibbs[i] = std::exp(logs[i] - lz);

  for (std::size_t i = 0; i < idx.count(); ++i)
    res.max_abs_diff = std::max(res.max_abs_diff, std::abs(res.pi_power[i] - res.pi_gibbs[i]));
  res.max_balance_residual = p.max_detailed_balance_residual(res.pi_gibbs);
  return res;
}

double expected_hitting_time(const SparseMarkov& chain, std::size_t start,
                             const std::vector<char>& target, double rel_tol) {
  if (target.size() != chain.states)
    throw std::invalid_argument("expected_hitting_time: target mask size mismatch");
  bool any = false;
  for (char t : target) any |= (t != 0);
  if (!any) throw std::invalid_argument("expected_hitting_time: empty target set");
  if (target[start]) return 0.0;

  // Reachability: the chains here have symmetric support, so forward BFS
  // from the start over positive entries suffices.
  {
    std::vector<char> seen(chain.states, 0);
    std::deque<std::size_t> queue{start};
    seen[start] = 1;
    bool reached = false;
    while (!queue.empty() && !reached) {
      std::size_t i = queue.front();
      queue.pop_front();
      for (std::size_t e = chain.row_ptr[i]; e < chain.row_ptr[i + 1]; ++e) {
        if (chain.prob[e] <= 0.0) continue;
        std::size_t j = chain.col[e];
        if (target[j]) {
          reached = true;
          break;
        }
        if (!seen[j]) {
          seen[j] = 1;
          queue.push_back(j);
        }
      }
    }
    if (!reached) throw unreachable_target("expected_hitting_time: target not reachable");
  }

  std::vector<double> hvec(chain.states, 0.0);
  for (std::size_t sweep = 0; sweep < 10'000'000; ++sweep) {
    double worst_rel = 0.0;
    for (std::size_t i = 0; i < chain.states; ++i) {
      if (target[i]) continue;
      double acc = 1.0;
      for (std::size_t e = chain.row_ptr[i]; e < chain.row_ptr[i + 1]; ++e)
        if (!target[chain.col[e]]) acc += chain.prob[e] * hvec[chain.col[e]];
      // h_i = 1 + hold_i h_i + sum_offdiag  =>  solve for h_i directly
      double denom = 1.0 - chain.hold[i];
      double next = acc / denom;
      double rel = std::abs(next - hvec[i]) / std::max(1.0, std::abs(next));
      worst_rel = std::max(worst_rel, rel);
      hvec[i] = next;
    }
    if (worst_rel <= rel_tol) break;
  }
  return hvec[start];
}

double expected_hitting_time(const StateSpaceIndex& idx, const PlantedGraph& g,
                             const GibbsWeightContext& ctx, std::size_t start,
                             const std::vector<char>& target, double rel_tol) {
  SparseMarkov p = build_metropolis_matrix(idx, g, ctx);
  return expected_hitting_time(p, start, target, rel_tol);
}

}  // namespace cliquemc
