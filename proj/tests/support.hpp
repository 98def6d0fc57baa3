#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "pulsekick/types.hpp"

namespace testsupport {

// Deterministic draws for property tests. The engine is seeded per test so
// failures reproduce exactly; doubles are mapped from raw engine output to
// stay independent of distribution implementation details.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    const double u = std::max(uniform(), 1e-300);
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(2.0 * std::numbers::pi * v);
  }

  pulsekick::ComplexScalar complex_gaussian() {
    return {gaussian(), gaussian()};
  }

  // Uniform on the normalized-state sphere.
  pulsekick::SuperpositionState state() {
    while (true) {
      const pulsekick::ComplexScalar a1 = complex_gaussian();
      const pulsekick::ComplexScalar a2 = complex_gaussian();
      if (std::hypot(std::abs(a1), std::abs(a2)) > 1e-6) {
        return pulsekick::SuperpositionState::normalized(a1, a2);
      }
    }
  }

  pulsekick::Coupling coupling(double mod_lo = 1e-3, double mod_hi = 10.0) {
    const double m = uniform(mod_lo, mod_hi);
    const double ph = uniform(-std::numbers::pi, std::numbers::pi);
    return pulsekick::Coupling(std::polar(m, ph));
  }

 private:
  std::mt19937_64 engine_;
};

inline double state_distance(const pulsekick::SuperpositionState& x,
                             const pulsekick::SuperpositionState& y) {
  return std::max(std::abs(x.a1() - y.a1()), std::abs(x.a2() - y.a2()));
}

}  // namespace testsupport
