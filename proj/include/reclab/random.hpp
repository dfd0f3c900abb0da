#pragma once

// Portable seeded randomness. std::mt19937_64 has a bit-exact output
// sequence on every conforming implementation; the distribution helpers
// below are written out so results do not depend on the standard library's
// unspecified distribution algorithms.

#include <cstddef>
#include <cstdint>
#include <random>

namespace reclab {

/// splitmix64 finalizer over (seed, stream); derives independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix_seed(seed, stream)) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi);
  /// Box-Muller; one engine draw pair per call.
  double normal(double mean, double sigma);
  /// Unbiased uniform integer in [0, n); n must be positive.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace reclab
