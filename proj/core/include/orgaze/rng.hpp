#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace orgaze {

/// Seeded random stream with portable draws. The engine is std::mt19937_64,
/// whose output sequence is fixed by the standard; the distributions below
/// are written out so results do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace orgaze
