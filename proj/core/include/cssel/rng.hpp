#pragma once

#include <cstdint>
#include <random>

#include "cssel/types.hpp"

namespace cssel {

/// Seeded 64-bit generator with platform-independent derived draws.
///
/// The standard distributions are implementation-defined, so uniform
/// integers and normals are derived here from the raw mt19937_64 stream.
/// Independent streams for parallel attempts or trials come from
/// `derive_seed(master, stream)` (splitmix64 mixing).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n); n must be positive.
  Index below(Index n);
  /// Standard normal via the Marsaglia polar method.
  double normal();
  /// Bernoulli(p).
  bool bernoulli(double p) { return uniform() < p; }

  Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// m x n matrix with i.i.d. standard normal entries.
Matrix gaussian_matrix(Index rows, Index cols, Rng& rng);

}  // namespace cssel
