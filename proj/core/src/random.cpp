#include "trajeval/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace trajeval {

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vec3 Rng::unit_vector() {
  while (true) {
    const double x = normal();
    const double y = normal();
    const double z = normal();
    const Vec3 v(x, y, z);
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

std::uint64_t Rng::index(std::uint64_t n) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  while (true) {
    const std::uint64_t v = next();
    if (v < limit) return v % n;
  }
}

}  // namespace trajeval
