#pragma once

#include <cstdint>

namespace cliquemc {

// SplitMix64 step (Steele/Lea/Flood). Used for seed expansion and for the
// documented (master, cell, trial) -> seed derivation below.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// xoshiro256++ 1.0 (Blackman/Vigna), state filled from SplitMix64 so any
// 64-bit seed (including 0) is valid. Same seed -> same stream on every
// platform; kAlgorithm is recorded in output files so experiments stay
// replayable if the generator ever changes.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "xoshiro256++-1.0/splitmix64-seed/v1";

  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Unbiased integer in [0, bound), Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (lo < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin() { return (next() >> 63) != 0; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Per-task seed for sweeps: three chained SplitMix64 steps mixing master
// seed, cell index and trial index. Documented so any single trajectory can
// be replayed from the record alone.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell,
                                 std::uint64_t trial) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s = h ^ ((cell + 1) * 0xd1b54a32d192ed03ull);
  h = splitmix64(s);
  s = h ^ ((trial + 1) * 0x8cb92ba72f3d8dd7ull);
  return splitmix64(s);
}

// A chain owns two independent streams: one for the uniform vertex
// proposals, one for accept/reject draws. Keeping proposals on their own
// stream makes "same proposal stream, different acceptance rule"
// comparisons (Metropolis vs greedy) exact.
struct ChainRng {
  Rng proposal;
  Rng accept;

  explicit ChainRng(std::uint64_t seed)
      : proposal(derive_seed(seed, 0x70726f70ull, 0)),
        accept(derive_seed(seed, 0x61636370ull, 0)) {}
};

}  // namespace cliquemc
