#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cliquemc/hamiltonian.hpp"

namespace cliquemc {

// Birth-death proxy for the clique-size trajectory. Downward rate matches
// the exact removal rate of the clique chain; upward rate is the expansion
// floor 1/(20*2^s), switched off at s >= floor((1-eta)*log2 n).
struct BirthDeath1D {
  int n = 0;
  double beta = 0.0;
  HamiltonianSpec h;
  int ceiling = 0;

  double down(int s) const;  // P(s, s-1)
  double up(int s) const;    // P(s, s+1)
};

BirthDeath1D make_birth_death_1d(int n, const GibbsWeightContext& ctx, double eta);

struct BdTrajectory {
  std::vector<std::uint64_t> occupancy;  // time spent at each value
  std::optional<std::uint64_t> first_hit_target;
  int final_state = 0;
  std::uint64_t steps = 0;
};

BdTrajectory run_birth_death_1d(const BirthDeath1D& bd, int start, std::uint64_t steps,
                                std::uint64_t seed, std::optional<int> hit_target = {});

// Closed-form stationary law of the 1D kernel on {0..ceiling}, from the
// telescoped product of per-step up/down ratios. Normalized.
std::vector<double> birth_death_1d_stationary(const BirthDeath1D& bd);

// Size x temperature walk mirroring simulated tempering: size moves carry
// the level-move weight a, temperature moves (1-a)/2 with the Zhat-ratio
// acceptance; proposals off the [0,n] x [0,m] grid are rejected.
struct BirthDeath2D {
  int n = 0;
  HamiltonianSpec h;
  TemperatureLadder ladder;
  double a = 0.5;
  int ceiling = 0;

  int m() const { return ladder.m(); }
  double size_down(int s, int j) const;
  double size_up(int s, int j) const;
  double temp_move(int s, int j, int j2) const;  // j2 = j +/- 1, 0 off-grid
  double hold(int s, int j) const;
};

BirthDeath2D make_birth_death_2d(int n, const HamiltonianSpec& h,
                                 const TemperatureLadder& ladder, double a, double eta);

struct Bd2Trajectory {
  int n = 0;
  int m = 0;
  std::vector<std::uint64_t> occupancy;  // (n+1) x (m+1), row-major by size
  int final_size = 0;
  int final_temp = 0;
  std::uint64_t steps = 0;

  std::uint64_t at(int s, int j) const {
    return occupancy[static_cast<std::size_t>(s) * (m + 1) + j];
  }
};

Bd2Trajectory run_birth_death_2d(const BirthDeath2D& bd, int start_size, int start_temp,
                                 std::uint64_t steps, std::uint64_t seed);

// Kolmogorov square-cycle residual: max over unit squares of the absolute
// difference between clockwise and counterclockwise edge products.
double kolmogorov_square_residual(const BirthDeath2D& bd);

}  // namespace cliquemc
