#pragma once

#include <vector>

#include "cliquemc/hamiltonian.hpp"

namespace cliquemc {

// log of binomial(n, k) via lgamma; -inf when infeasible.
double log_choose(double n, double k);

// log E[W_{q,r}] = log[ C(k,r) C(n-k,q-r) 2^{C(r,2)-C(q,2)} ], evaluated
// exactly in log domain for finite n (no asymptotics).
double log_expected_census(int n, int k, int q, int r);

// Requested block of log E[W_{q,r}] values.
struct MomentTable {
  int n = 0;
  int k = 0;
  int max_q = 0;
  int max_r = 0;
  std::vector<double> log_e;  // (max_q+1) x (max_r+1), row-major; -inf infeasible

  double at(int q, int r) const { return log_e[static_cast<std::size_t>(q) * (max_r + 1) + r]; }
};

MomentTable moment_table(int n, int k, int max_q, int max_r);

// Leading-order exponent of E[W_{q,r}] per (log2 n)^2:
// (ln 2) * (rho - rho^2/2 - (1-alpha)*gamma + gamma^2/2).
// A predictor of census trends, not an acceptance oracle by itself.
double asymptotic_exponent(double alpha, double rho, double gamma);

struct GatewayMoment {
  double log_value = 0.0;
  bool feasible = false;
};

// log of the first-moment bound on |Psi_q ∩ Omega_{p,<=u}|:
// sum over r <= u of C(k,r) C(n-k,p-r) C(n-p,q-p) C(p-r,2p-q-u)
//   * 2^{-[C(p,2)-C(r,2)+(q-p)(2p-q-u)]}.
GatewayMoment log_gateway_first_moment(int n, int k, int q, int p, int u);

// log nu(p) - log nu(q) for the 1D birth-death proxy, p <= q:
// (q-p) ln 20 + ln(q!/p!) + (ln 2)(C(q,2)-C(p,2)) - (q-p) ln n + beta (h_p - h_q).
double bd_stationary_log_ratio(const GibbsWeightContext& ctx, double eta, int n, int p, int q);

// Stationary law of the 2D size/temperature walk, from detailed balance
// along grid edges (the min-acceptance factors cancel in each ratio):
//   nu((s,j)) ∝ (1/Zhat_j) * (n^s / (20^s s! 2^{C(s,2)})) * exp(beta_j h_s).
// At m = 0 this collapses to the 1D law; the eigen-solve of the explicit
// kernel pins it numerically.
double st_2d_log_stationary(int n, const TemperatureLadder& ladder,
                            const HamiltonianSpec& h, double eta, int s, int j);

// Normalized table over {0..ceiling} x {0..m}, row-major by size.
std::vector<double> st_2d_stationary_table(int n, const TemperatureLadder& ladder,
                                           const HamiltonianSpec& h, double eta);

}  // namespace cliquemc
