#include "pulsekick/qcore.hpp"

#include <cmath>
#include <numbers>

namespace pulsekick {

namespace {

constexpr ComplexScalar kImag(0.0, 1.0);

}  // namespace

SuperpositionState delta_propagate(const SuperpositionState& state,
                                   const Coupling& k) {
  const double km = k.modulus();
  const double c = std::cos(km);
  const double s = std::sin(km);
  const ComplexScalar u = k.unit_phase();  // e^{i arg k}; 1 at k = 0
  const ComplexScalar c1 = state.a1() * c - kImag * state.a2() * u * s;
  const ComplexScalar c2 =
      state.a2() * c - kImag * state.a1() * std::conj(u) * s;
  // The map is exactly unitary; construction at 1e-12 both enforces that
  // and cleans the rounding residual. Stored states are unit-norm to
  // rounding, so this never rejects a valid input.
  return SuperpositionState::checked(c1, c2, 1e-12);
}

double transition_probability(const SuperpositionState& state,
                              const Coupling& k) {
  const double km = k.modulus();
  const double c = std::cos(km);
  const double s = std::sin(km);
  const ComplexScalar a1 = state.a1();
  const ComplexScalar a2 = state.a2();
  double p = state.p2() * c * c + state.p1() * s * s;
  // Interference term; drops out at k = 0 where the phase ratio is a
  // convention rather than a value.
  if (km > 0.0) {
    const ComplexScalar kv = k.value();
    const ComplexScalar cross = std::conj(a1) * a2 / (2.0 * std::conj(kv)) -
                                std::conj(a2) * a1 / (2.0 * kv);
    p += (kImag * km * std::sin(2.0 * km) * cross).real();
  }
  // Rounding can push the exact value over the ends of [0, 1].
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

StrengthClass classify_strength(const Coupling& k, double tol) {
  if (!(tol > 0.0)) {
    throw DomainError("classification tolerance must be positive");
  }
  const double ratio = 2.0 * k.modulus() / std::numbers::pi;
  const long long ell = std::llround(ratio);
  StrengthClass result;
  if (std::abs(ratio - static_cast<double>(ell)) > tol) {
    return result;  // Generic, ell unset
  }
  result.ell = ell;
  switch (ell % 4) {
    case 0:
      result.kind = StrengthKind::Identity;
      break;
    case 2:
      result.kind = StrengthKind::SignFlip;
      break;
    default:
      result.kind = StrengthKind::Swap;
      break;
  }
  return result;
}

double p12_delta(const Coupling& k) {
  const double s = std::sin(k.modulus());
  return s * s;
}

double p12_finite(double omega0_amp, double gap, double width) {
  if (!std::isfinite(omega0_amp) || !std::isfinite(gap) ||
      !std::isfinite(width)) {
    throw NonFiniteInput("pulse parameters must be finite");
  }
  if (width < 0.0 || omega0_amp < 0.0) {
    throw DomainError("pulse height and width must be nonnegative");
  }
  const double half_pi = std::numbers::pi / 2.0;
  const double s = std::sin(half_pi * omega0_amp * width);
  const double ch = std::cosh(half_pi * gap * width);
  return (s * s) / (ch * ch);
}

}  // namespace pulsekick
