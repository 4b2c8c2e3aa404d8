#pragma once

#include <span>
#include <string>
#include <vector>

namespace cliquemc {

// Size-indexed energy vector h = (h_0, ..., h_n). Immutable once built.
struct HamiltonianSpec {
  enum class Kind { Identity, Custom };

  std::vector<double> values;
  Kind kind = Kind::Custom;

  int n() const { return static_cast<int>(values.size()) - 1; }
  double operator[](int q) const { return values[q]; }
};

// h_q = q; this is the classical clique-size Hamiltonian.
HamiltonianSpec identity_hamiltonian(int n);

HamiltonianSpec custom_hamiltonian(std::vector<double> values);

struct RegularityCheck {
  bool regular = false;
  // Lexicographically first violating pair (q, q'); (0, 0) flags h_0 != 0.
  int first = 0;
  int second = 0;
};

// Regular means h_0 = 0 and |h_q - h_q'| <= |q - q'| for all
// q, q' <= floor(2.1 * log2 n).
RegularityCheck check_regular(const HamiltonianSpec& h, int n);

bool is_monotone(const HamiltonianSpec& h);

// Inverse temperature paired with a Hamiltonian. log-weight of a clique of
// size q is beta * h_q; weights are never materialized outside log domain.
struct GibbsWeightContext {
  double beta = 0.0;
  HamiltonianSpec h;

  double log_weight(int size) const { return beta * h[size]; }
};

// log of the Metropolis acceptance probability for a single-vertex move,
// min(0, beta * (h_to - h_from)). Sizes must differ by exactly one.
double log_acceptance(const GibbsWeightContext& ctx, int from_size, int to_size);

// Numerically stable log(sum exp(x_i)); -inf for an empty span.
double log_sum_exp(std::span<const double> xs);

// Ascending inverse temperatures beta_0 < ... < beta_m with log partition
// function estimates log Zhat(beta_i) used by the tempering moves.
struct TemperatureLadder {
  std::vector<double> beta;
  std::vector<double> log_z_hat;

  int m() const { return static_cast<int>(beta.size()) - 1; }
};

// Validates the ladder (strictly increasing betas, finite log estimates,
// matching lengths). Non-increasing Zhat estimates are legal, the dynamics
// is well-defined regardless; callers may surface a warning.
TemperatureLadder make_ladder(std::vector<double> betas, std::vector<double> log_z_hat);

bool ladder_z_increasing(const TemperatureLadder& ladder);

// log acceptance of a temperature move i -> i2 in state of Hamiltonian
// value h_size: min(0, log Zhat_i - log Zhat_i2 + (beta_i2 - beta_i)*h_size).
double temperature_log_acceptance(const TemperatureLadder& ladder, int i, int i2,
                                  double h_value);

}  // namespace cliquemc
