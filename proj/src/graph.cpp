#include "cliquemc/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cliquemc/rng.hpp"

namespace cliquemc {

int PlantedGraph::degree(int v) const {
  const std::uint64_t* r = row(v);
  int d = 0;
  for (int i = 0; i < row_words_; ++i) d += std::popcount(r[i]);
  return d;
}

std::uint64_t PlantedGraph::fingerprint() const {
  // FNV-1a over the header and adjacency words.
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  mix(static_cast<std::uint64_t>(n));
  mix(static_cast<std::uint64_t>(k));
  mix(seed);
  for (auto w : adj) mix(w);
  return h;
}

static void set_edge(PlantedGraph& g, int u, int v) {
  g.row(u)[v >> 6] |= 1ull << (v & 63);
  g.row(v)[u >> 6] |= 1ull << (u & 63);
}

PlantedGraph generate(int n, int k, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate: n must be positive");
  if (k < 0 || k > n) throw std::invalid_argument("generate: require 0 <= k <= n");

  PlantedGraph g;
  g.n = n;
  g.k = k;
  g.seed = seed;
  g.row_words_ = VertexSet::word_count(n);
  g.adj.assign(static_cast<std::size_t>(n) * g.row_words_, 0);
  g.planted = VertexSet(n);

  Rng rng(seed);

  // Planted subset: partial Fisher-Yates over the identity permutation,
  // first k entries form a uniform k-subset.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(perm[i], perm[j]);
  }
  for (int i = 0; i < k; ++i) g.planted.set(perm[i]);

  // One fair bit per pair, upper triangle in row-major order. The pair
  // stream is drawn for every pair regardless of k, so the base G(n,1/2)
  // instance depends only on (n, seed).
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next() >> 63) set_edge(g, u, v);

  // Complete the planted clique.
  for (int u = 0; u < n; ++u) {
    if (!g.planted.test(u)) continue;
    for (int v = u + 1; v < n; ++v)
      if (g.planted.test(v)) set_edge(g, u, v);
  }
  return g;
}

PlantedGraph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges, int k) {
  if (n < 1) throw std::invalid_argument("graph_from_edges: n must be positive");
  PlantedGraph g;
  g.n = n;
  g.k = k;
  g.seed = 0;
  g.row_words_ = VertexSet::word_count(n);
  g.adj.assign(static_cast<std::size_t>(n) * g.row_words_, 0);
  g.planted = VertexSet(n);
  for (int i = 0; i < k; ++i) g.planted.set(i);
  for (auto [u, v] : edges) {
    if (u == v || u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("graph_from_edges: bad edge");
    set_edge(g, u, v);
  }
  return g;
}

VertexSet common_neighbors(const PlantedGraph& g, const VertexSet& u) {
  VertexSet a = VertexSet::full(g.n);
  u.for_each([&](int v) { a.and_with(g.row(v)); });
  // Members exclude themselves through the zero diagonal; for the empty set
  // this correctly returns all of V.
  return a;
}

bool is_clique(const PlantedGraph& g, const VertexSet& c) {
  bool ok = true;
  c.for_each([&](int v) {
    if (!ok) return;
    VertexSet rest = c;
    rest.reset(v);
    if (!rest.is_subset_of(g.row(v))) ok = false;
  });
  return ok;
}

TopDegreeResult top_k_degrees(const PlantedGraph& g) {
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> deg(g.n);
  for (int v = 0; v < g.n; ++v) deg[v] = g.degree(v);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (deg[a] != deg[b]) return deg[a] > deg[b];
    return a < b;
  });
  TopDegreeResult res;
  res.members = VertexSet(g.n);
  for (int i = 0; i < g.k; ++i) res.members.set(order[i]);
  res.overlap = res.members.intersect_count(g.planted);
  return res;
}

namespace {

struct ExpansionScan {
  const PlantedGraph& g;
  const ExpansionOptions& opts;
  int ceiling;
  ExpansionReport rep;
  std::vector<int> stack;
  bool done = false;

  ExpansionScan(const PlantedGraph& gr, int ceil, const ExpansionOptions& o)
      : g(gr), opts(o), ceiling(ceil) {
    rep.ceiling = ceil;
    rep.min_ratio = std::numeric_limits<double>::infinity();
  }

  // Violation test in exact integer arithmetic: |A| < n / (20*2^q)
  // iff 20 * |A| * 2^q < n.
  void check(int common) {
    ++rep.cliques_checked;
    int q = static_cast<int>(stack.size());
    double ratio = std::ldexp(static_cast<double>(common), q) / g.n;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    bool violated = (20ull * static_cast<std::uint64_t>(common)) << q < static_cast<std::uint64_t>(g.n);
    if (violated) {
      ++rep.violation_count;
      if (rep.violations.size() < opts.max_recorded_violations)
        rep.violations.push_back({stack, common, g.n / (20.0 * std::ldexp(1.0, q))});
      if (opts.stop_at_first_violation) done = true;
    }
  }
};

void expansion_dfs(ExpansionScan& s, const VertexSet& a, int next_from) {
  if (s.done) return;
  if (s.rep.cliques_checked >= s.opts.node_budget) {
    s.rep.budget_exceeded = true;
    s.done = true;
    return;
  }
  s.check(a.count());
  if (s.done || static_cast<int>(s.stack.size()) >= s.ceiling) return;
  VertexSet cand = a;
  cand.clear_below(next_from);
  cand.for_each([&](int v) {
    if (s.done) return;
    VertexSet child = a;
    child.and_with(s.g.row(v));
    s.stack.push_back(v);
    expansion_dfs(s, child, v + 1);
    s.stack.pop_back();
  });
}

}  // namespace

ExpansionReport check_expansion(const PlantedGraph& g, double eta,
                                std::uint64_t sample_budget,
                                const ExpansionOptions& opts) {
  if (g.n < 2) throw std::invalid_argument("check_expansion: n >= 2 required");
  if (eta <= 0.0 || eta >= 1.0) throw std::invalid_argument("check_expansion: eta in (0,1) required");
  if (sample_budget == 0) throw std::invalid_argument("check_expansion: zero sample budget");

  int ceiling = static_cast<int>(std::floor((1.0 - eta) * std::log2(static_cast<double>(g.n))));
  ExpansionScan scan(g, ceiling, opts);

  if (sample_budget == kExhaustive) {
    scan.rep.exhaustive = true;
    expansion_dfs(scan, VertexSet::full(g.n), 0);
    if (scan.rep.budget_exceeded) scan.rep.exhaustive = false;
  } else {
    // Random greedy growth: extend by a uniform common neighbor until the
    // ceiling; every prefix clique along the way is checked.
    Rng rng(opts.sample_seed);
    for (std::uint64_t it = 0; it < sample_budget && !scan.done; ++it) {
      VertexSet a = VertexSet::full(g.n);
      scan.stack.clear();
      scan.check(g.n);
      while (!scan.done && static_cast<int>(scan.stack.size()) < ceiling) {
        int cnt = a.count();
        if (cnt == 0) break;
        int v = a.nth_set_bit(static_cast<int>(rng.below(static_cast<std::uint64_t>(cnt))));
        a.and_with(g.row(v));
        scan.stack.push_back(v);
        scan.check(a.count());
      }
    }
  }
  return scan.rep;
}

void write_graph(std::ostream& os, const PlantedGraph& g) {
  os << "pcgraph v1 n=" << g.n << " k=" << g.k << " seed=" << g.seed << "\n";
  bool first = true;
  g.planted.for_each([&](int v) {
    if (!first) os << ' ';
    os << v;
    first = false;
  });
  os << "\n";
  char buf[17];
  for (int v = 0; v < g.n; ++v) {
    const std::uint64_t* r = g.row(v);
    for (int w = 0; w < g.row_words(); ++w) {
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(r[w]));
      os << buf;
    }
    os << "\n";
  }
}

PlantedGraph read_graph(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("read_graph: missing header");
  int n = -1, k = -1;
  unsigned long long seed = 0;
  if (std::sscanf(header.c_str(), "pcgraph v1 n=%d k=%d seed=%llu", &n, &k, &seed) != 3)
    throw std::runtime_error("read_graph: bad header: " + header);
  if (n < 1 || k < 0 || k > n) throw std::runtime_error("read_graph: bad dimensions");

  PlantedGraph g;
  g.n = n;
  g.k = k;
  g.seed = seed;
  g.row_words_ = VertexSet::word_count(n);
  g.adj.assign(static_cast<std::size_t>(n) * g.row_words_, 0);
  g.planted = VertexSet(n);

  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_graph: missing planted line");
  {
    std::istringstream ss(line);
    int v, cnt = 0;
    while (ss >> v) {
      if (v < 0 || v >= n) throw std::runtime_error("read_graph: planted vertex out of range");
      g.planted.set(v);
      ++cnt;
    }
    if (cnt != k) throw std::runtime_error("read_graph: planted size mismatch");
  }

  for (int v = 0; v < n; ++v) {
    if (!std::getline(is, line)) throw std::runtime_error("read_graph: missing adjacency row");
    if (static_cast<int>(line.size()) != 16 * g.row_words())
      throw std::runtime_error("read_graph: bad row length");
    for (int w = 0; w < g.row_words(); ++w) {
      std::uint64_t word = 0;
      for (int c = 0; c < 16; ++c) {
        char ch = line[16 * w + c];
        int d;
        if (ch >= '0' && ch <= '9') d = ch - '0';
        else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
        else throw std::runtime_error("read_graph: bad hex digit");
        word = (word << 4) | static_cast<std::uint64_t>(d);
      }
      g.row(v)[w] = word;
    }
  }

  // Structural validation: clean padding, symmetry, zero diagonal,
  // planted completeness.
  if (n & 63) {
    const std::uint64_t pad_mask = ~0ull << (n & 63);
    for (int v = 0; v < n; ++v)
      if (g.row(v)[g.row_words() - 1] & pad_mask)
        throw std::runtime_error("read_graph: padding bits set beyond n");
  }
  for (int u = 0; u < n; ++u) {
    if (g.edge(u, u)) throw std::runtime_error("read_graph: nonzero diagonal");
    for (int v = u + 1; v < n; ++v) {
      if (g.edge(u, v) != g.edge(v, u)) throw std::runtime_error("read_graph: asymmetric adjacency");
      if (g.planted.test(u) && g.planted.test(v) && !g.edge(u, v))
        throw std::runtime_error("read_graph: planted pair missing an edge");
    }
  }
  return g;
}

void save_graph(const std::string& path, const PlantedGraph& g) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_graph: cannot open " + path);
  write_graph(f, g);
}

PlantedGraph load_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_graph: cannot open " + path);
  return read_graph(f);
}

}  // namespace cliquemc
