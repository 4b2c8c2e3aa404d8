#include "cliquemc/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cliquemc {

HamiltonianSpec identity_hamiltonian(int n) {
  if (n < 1) throw std::invalid_argument("identity_hamiltonian: n must be positive");
  HamiltonianSpec h;
  h.kind = HamiltonianSpec::Kind::Identity;
  h.values.resize(n + 1);
  for (int q = 0; q <= n; ++q) h.values[q] = static_cast<double>(q);
  return h;
}

HamiltonianSpec custom_hamiltonian(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("custom_hamiltonian: empty vector");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("custom_hamiltonian: non-finite entry");
  HamiltonianSpec h;
  h.kind = HamiltonianSpec::Kind::Custom;
  h.values = std::move(values);
  return h;
}

RegularityCheck check_regular(const HamiltonianSpec& h, int n) {
  if (h.n() != n) throw std::invalid_argument("check_regular: length mismatch");
  if (h.values[0] != 0.0) return {false, 0, 0};
  int window = static_cast<int>(std::floor(2.1 * std::log2(static_cast<double>(n))));
  window = std::min(window, n);
  for (int q = 0; q <= window; ++q)
    for (int q2 = q + 1; q2 <= window; ++q2)
      if (std::abs(h.values[q] - h.values[q2]) > static_cast<double>(q2 - q))
        return {false, q, q2};
  return {true, -1, -1};
}

bool is_monotone(const HamiltonianSpec& h) {
  for (std::size_t q = 1; q < h.values.size(); ++q)
    if (h.values[q] < h.values[q - 1]) return false;
  return true;
}

double log_acceptance(const GibbsWeightContext& ctx, int from_size, int to_size) {
  const int n = ctx.h.n();
  if (from_size < 0 || to_size < 0 || from_size > n || to_size > n)
    throw std::invalid_argument("log_acceptance: size out of range");
  if (std::abs(from_size - to_size) != 1)
    throw std::invalid_argument("log_acceptance: sizes must differ by one");
  return std::min(0.0, ctx.beta * (ctx.h[to_size] - ctx.h[from_size]));
}

double log_sum_exp(std::span<const double> xs) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : xs) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;  // empty or all -inf
  double s = 0.0;
  for (double x : xs) s += std::exp(x - mx);
  return mx + std::log(s);
}

TemperatureLadder make_ladder(std::vector<double> betas, std::vector<double> log_z_hat) {
  if (betas.empty()) throw std::invalid_argument("make_ladder: empty ladder");
  if (betas.size() != log_z_hat.size())
    throw std::invalid_argument("make_ladder: beta/log Zhat length mismatch");
  for (std::size_t i = 0; i + 1 < betas.size(); ++i)
    if (!(betas[i] < betas[i + 1]))
      throw std::invalid_argument("make_ladder: betas must be strictly increasing");
  for (double z : log_z_hat)
    if (!std::isfinite(z)) throw std::invalid_argument("make_ladder: log Zhat must be finite");
  return {std::move(betas), std::move(log_z_hat)};
}

bool ladder_z_increasing(const TemperatureLadder& ladder) {
  for (std::size_t i = 0; i + 1 < ladder.log_z_hat.size(); ++i)
    if (!(ladder.log_z_hat[i] < ladder.log_z_hat[i + 1])) return false;
  return true;
}

double temperature_log_acceptance(const TemperatureLadder& ladder, int i, int i2,
                                  double h_value) {
  return std::min(0.0, ladder.log_z_hat[i] - ladder.log_z_hat[i2] +
                           (ladder.beta[i2] - ladder.beta[i]) * h_value);
}

}  // namespace cliquemc
