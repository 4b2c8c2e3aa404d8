#include "cliquemc/birth_death.hpp"

#include <cmath>
#include <stdexcept>

#include "cliquemc/rng.hpp"

namespace cliquemc {

double BirthDeath1D::down(int s) const {
  if (s <= 0) return 0.0;
  double acc = std::min(1.0, std::exp(beta * (h[s - 1] - h[s])));
  return (static_cast<double>(s) / n) * acc;
}

double BirthDeath1D::up(int s) const {
  if (s < 0 || s >= ceiling || s >= n) return 0.0;
  double acc = std::min(1.0, std::exp(beta * (h[s + 1] - h[s])));
  return std::ldexp(1.0 / 20.0, -s) * acc;  // 1/(20*2^s)
}

BirthDeath1D make_birth_death_1d(int n, const GibbsWeightContext& ctx, double eta) {
  if (n < 2) throw std::invalid_argument("birth_death_1d: n >= 2 required");
  if (eta <= 0.0 || eta >= 1.0) throw std::invalid_argument("birth_death_1d: eta in (0,1) required");
  if (ctx.h.n() < n) throw std::invalid_argument("birth_death_1d: Hamiltonian too short");
  BirthDeath1D bd;
  bd.n = n;
  bd.beta = ctx.beta;
  bd.h = ctx.h;
  bd.ceiling = static_cast<int>(std::floor((1.0 - eta) * std::log2(static_cast<double>(n))));
  return bd;
}

BdTrajectory run_birth_death_1d(const BirthDeath1D& bd, int start, std::uint64_t steps,
                                std::uint64_t seed, std::optional<int> hit_target) {
  if (start < 0 || start > bd.n) throw std::invalid_argument("birth_death_1d: bad start");
  BdTrajectory out;
  out.occupancy.assign(bd.n + 1, 0);
  Rng rng(seed);
  int s = start;
  if (hit_target && s == *hit_target) out.first_hit_target = 0;
  for (std::uint64_t t = 1; t <= steps; ++t) {
    double u = rng.uniform();
    double pd = bd.down(s);
    if (u < pd) {
      --s;
    } else if (u < pd + bd.up(s)) {
      ++s;
    }
    ++out.occupancy[s];
    if (hit_target && !out.first_hit_target && s == *hit_target) {
      out.first_hit_target = t;
      out.final_state = s;
      out.steps = t;
      return out;
    }
  }
  out.final_state = s;
  out.steps = steps;
  return out;
}

std::vector<double> birth_death_1d_stationary(const BirthDeath1D& bd) {
  // log nu(i) - log nu(0) = sum_{s=1..i} log(up(s-1)/down(s)); support ends
  // at the ceiling because up() vanishes there.
  std::vector<double> logs(bd.ceiling + 1, 0.0);
  for (int i = 1; i <= bd.ceiling; ++i)
    logs[i] = logs[i - 1] + std::log(bd.up(i - 1)) - std::log(bd.down(i));
  double z = log_sum_exp(logs);
  std::vector<double> nu(bd.ceiling + 1);
  for (int i = 0; i <= bd.ceiling; ++i) nu[i] = std::exp(logs[i] - z);
  return nu;
}

double BirthDeath2D::size_down(int s, int j) const {
  if (s <= 0) return 0.0;
  double acc = std::min(1.0, std::exp(ladder.beta[j] * (h[s - 1] - h[s])));
  return a * (static_cast<double>(s) / n) * acc;
}

double BirthDeath2D::size_up(int s, int j) const {
  if (s < 0 || s >= ceiling || s >= n) return 0.0;
  double acc = std::min(1.0, std::exp(ladder.beta[j] * (h[s + 1] - h[s])));
  return a * std::ldexp(1.0 / 20.0, -s) * acc;
}

double BirthDeath2D::temp_move(int s, int j, int j2) const {
  if (j2 < 0 || j2 > m() || std::abs(j2 - j) != 1) return 0.0;
  return (1.0 - a) / 2.0 * std::exp(temperature_log_acceptance(ladder, j, j2, h[s]));
}

double BirthDeath2D::hold(int s, int j) const {
  return 1.0 - size_down(s, j) - size_up(s, j) - temp_move(s, j, j - 1) -
         temp_move(s, j, j + 1);
}

BirthDeath2D make_birth_death_2d(int n, const HamiltonianSpec& h,
                                 const TemperatureLadder& ladder, double a, double eta) {
  if (n < 2) throw std::invalid_argument("birth_death_2d: n >= 2 required");
  if (eta <= 0.0 || eta >= 1.0) throw std::invalid_argument("birth_death_2d: eta in (0,1) required");
  if (a <= 0.0 || a >= 1.0) throw std::invalid_argument("birth_death_2d: a in (0,1) required");
  if (h.n() < n) throw std::invalid_argument("birth_death_2d: Hamiltonian too short");
  if (!is_monotone(h))
    throw std::invalid_argument("birth_death_2d: monotone Hamiltonian required");
  BirthDeath2D bd;
  bd.n = n;
  bd.h = h;
  bd.ladder = ladder;
  bd.a = a;
  bd.ceiling = static_cast<int>(std::floor((1.0 - eta) * std::log2(static_cast<double>(n))));
  return bd;
}

Bd2Trajectory run_birth_death_2d(const BirthDeath2D& bd, int start_size, int start_temp,
                                 std::uint64_t steps, std::uint64_t seed) {
  if (start_size < 0 || start_size > bd.n) throw std::invalid_argument("birth_death_2d: bad start size");
  if (start_temp < 0 || start_temp > bd.m()) throw std::invalid_argument("birth_death_2d: bad start temp");
  Bd2Trajectory out;
  out.n = bd.n;
  out.m = bd.m();
  out.occupancy.assign(static_cast<std::size_t>(bd.n + 1) * (bd.m() + 1), 0);
  Rng rng(seed);
  int s = start_size, j = start_temp;
  for (std::uint64_t t = 1; t <= steps; ++t) {
    double u = rng.uniform();
    double p1 = bd.size_down(s, j);
    double p2 = p1 + bd.size_up(s, j);
    double p3 = p2 + bd.temp_move(s, j, j - 1);
    double p4 = p3 + bd.temp_move(s, j, j + 1);
    if (u < p1) --s;
    else if (u < p2) ++s;
    else if (u < p3) --j;
    else if (u < p4) ++j;
    ++out.occupancy[static_cast<std::size_t>(s) * (bd.m() + 1) + j];
  }
  out.final_size = s;
  out.final_temp = j;
  out.steps = steps;
  return out;
}

double kolmogorov_square_residual(const BirthDeath2D& bd) {
  // Cycle (s,j) -> (s+1,j) -> (s+1,j+1) -> (s,j+1) -> (s,j) against its
  // reversal.
  double worst = 0.0;
  for (int s = 0; s + 1 <= bd.n; ++s) {
    for (int j = 0; j + 1 <= bd.m(); ++j) {
      double fwd = bd.size_up(s, j) * bd.temp_move(s + 1, j, j + 1) *
                   bd.size_down(s + 1, j + 1) * bd.temp_move(s, j + 1, j);
      double bwd = bd.temp_move(s, j, j + 1) * bd.size_up(s, j + 1) *
                   bd.temp_move(s + 1, j + 1, j) * bd.size_down(s + 1, j);
      worst = std::max(worst, std::abs(fwd - bwd));
    }
  }
  return worst;
}

}  // namespace cliquemc
