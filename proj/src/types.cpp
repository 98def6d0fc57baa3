#include "pulsekick/types.hpp"

#include <cmath>
#include <numbers>

namespace pulsekick {

bool is_finite(ComplexScalar v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

SuperpositionState SuperpositionState::normalized(ComplexScalar a1,
                                                  ComplexScalar a2) {
  if (!is_finite(a1) || !is_finite(a2)) {
    throw NonFiniteInput("state amplitudes must be finite");
  }
  const double r = std::hypot(std::abs(a1), std::abs(a2));
  // Guard against both the zero vector and denormal magnitudes whose
  // reciprocal would overflow.
  if (r < 1e-150) {
    throw DomainError("cannot normalize a zero state");
  }
  return SuperpositionState(a1 / r, a2 / r);
}

SuperpositionState SuperpositionState::checked(ComplexScalar a1,
                                               ComplexScalar a2, double tol) {
  if (!is_finite(a1) || !is_finite(a2)) {
    throw NonFiniteInput("state amplitudes must be finite");
  }
  const double r = std::hypot(std::abs(a1), std::abs(a2));
  if (std::abs(r - 1.0) > tol) {
    throw DomainError("state norm deviates from 1 beyond tolerance");
  }
  // Remove the residual deviation so the stored norm is 1 to rounding.
  return SuperpositionState(a1 / r, a2 / r);
}

Coupling::Coupling(ComplexScalar k) : k_(k) {
  if (!is_finite(k)) {
    throw NonFiniteInput("coupling must be finite");
  }
}

double Coupling::phase() const {
  if (is_zero()) {
    return 0.0;
  }
  const double p = std::arg(k_);
  // std::arg can return -pi for negative reals approached from below; fold
  // it onto the (-pi, pi] convention.
  return p == -std::numbers::pi ? std::numbers::pi : p;
}

ComplexScalar Coupling::unit_phase() const {
  if (is_zero()) {
    return ComplexScalar(1.0, 0.0);
  }
  return k_ / std::abs(k_);
}

std::string to_string(StrengthKind kind) {
  switch (kind) {
    case StrengthKind::Identity:
      return "identity";
    case StrengthKind::SignFlip:
      return "sign_flip";
    case StrengthKind::Swap:
      return "swap";
    case StrengthKind::Generic:
      return "generic";
  }
  return "generic";
}

}  // namespace pulsekick
