#pragma once

#include <cstdint>
#include <random>

#include "trajeval/geometry.hpp"

namespace trajeval {

/// Portable seeded random source.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the C++
/// standard for a given seed. Derived variates are computed here rather than
/// with <random> distributions (whose algorithms are implementation-defined):
///
///   uniform()  = (next() >> 11) * 2^-53                in [0, 1)
///   normal()   = sqrt(-2 ln(1 - u1)) * cos(2 pi u2)    two uniforms, u1 first
///
/// so every normal consumes exactly two engine outputs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }
  /// Three normals, normalized. Retries on an all-zero draw.
  Vec3 unit_vector();
  /// Uniform index in [0, n) by rejection (no modulo bias).
  std::uint64_t index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace trajeval
