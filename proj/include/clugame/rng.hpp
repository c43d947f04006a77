#pragma once

#include <cstdint>
#include <string_view>

#include "clugame/rational.hpp"

namespace clugame {

// Portable seeded generator: xoshiro256** seeded through splitmix64.
// All draws go through the helpers below (no std distributions), so a given
// seed produces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  // Uniform in [0, n), n > 0. Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t n);

  // Uniform in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi);

  // True with probability exactly p (p a rational in [0,1]).
  bool bernoulli(const Rat& p);

  // Uniform double in [0,1) with 53 random bits. Experiments-only helper.
  double unit_double();

 private:
  std::uint64_t s_[4];
};

// Documented stream-splitting rule: every independent stream is keyed by
// (master seed, stream label, index) and hashed with splitmix64 steps.
// Experiments derive per-trial seeds as derive_seed(seed, name, trial).
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                          std::uint64_t index);

}  // namespace clugame
