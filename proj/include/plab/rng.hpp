#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "plab/types.hpp"

namespace plab {

// xoshiro256** 1.0 (Blackman & Vigna, 2018) whose 256-bit state is filled by
// four successive outputs of SplitMix64 started at the user seed. Every
// stochastic routine in the library takes an explicit 64-bit seed and derives
// its stream from this generator only, so traces are reproducible across
// compilers and standard libraries (no <random> distributions are used).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  // Uniform on {0, ..., n-1}. Rejection sampling removes modulo bias.
  Index uniform_index(Index n);

  // Draws i with probability weights[i] / sum(weights). Weights must be
  // non-negative with positive sum.
  Index weighted_index(std::span<const double> weights);

  // Standard normal via Box-Muller (both variates are used in turn).
  double normal();

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

// Seed of trial t in a multi-trial run: base + t.
inline std::uint64_t trial_seed(std::uint64_t base, std::size_t trial) {
  return base + static_cast<std::uint64_t>(trial);
}

Vector normal_vector(Rng& rng, Index n);
Matrix normal_matrix(Rng& rng, Index rows, Index cols);

}  // namespace plab
