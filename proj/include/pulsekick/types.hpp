#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace pulsekick {

using ComplexScalar = std::complex<double>;

// Error taxonomy. Every throwing code path in the library uses one of these,
// so callers (and the CLI) can map failures to exit codes without string
// matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input contains NaN or Inf.
class NonFiniteInput final : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of the operation.
class DomainError final : public Error {
 public:
  using Error::Error;
};

// Operation requires a nonvanishing first amplitude.
class DegenerateState final : public Error {
 public:
  using Error::Error;
};

// Logarithm argument of the exponential-form constant vanished.
class DegenerateLog final : public Error {
 public:
  using Error::Error;
};

// Exponential-form constant is undefined at zero coupling.
class ZeroCoupling final : public Error {
 public:
  using Error::Error;
};

// Adaptive integrator could not meet the tolerance within its step budget.
class StepSizeUnderflow final : public Error {
 public:
  using Error::Error;
};

// Integrated amplitudes left the finite range; the system is norm
// preserving, so this signals a bug rather than a property of the input.
class NonFiniteState final : public Error {
 public:
  using Error::Error;
};

bool is_finite(ComplexScalar v);

// Normalized two-level state (a1, a2) with |a1|^2 + |a2|^2 = 1.
// Construction either rescales the input or rejects it; there is no way to
// hold a non-normalized instance.
class SuperpositionState {
 public:
  // Tolerance used by the rejecting constructor.
  static constexpr double kStrictNormTol = 1e-9;

  // Ground state (1, 0).
  SuperpositionState() : a1_(1.0), a2_(0.0) {}

  // Rescales (a1, a2) to unit norm.
  // Throws NonFiniteInput, or DomainError if both amplitudes vanish.
  static SuperpositionState normalized(ComplexScalar a1, ComplexScalar a2);

  // Rejects input whose norm deviates from 1 by more than tol, then removes
  // the residual deviation so the stored state is unit-norm to rounding.
  static SuperpositionState checked(ComplexScalar a1, ComplexScalar a2,
                                    double tol = kStrictNormTol);

  ComplexScalar a1() const { return a1_; }
  ComplexScalar a2() const { return a2_; }

  // Occupation probabilities of the two eigenstates.
  double p1() const { return std::norm(a1_); }
  double p2() const { return std::norm(a2_); }

 private:
  SuperpositionState(ComplexScalar a1, ComplexScalar a2) : a1_(a1), a2_(a2) {}

  ComplexScalar a1_;
  ComplexScalar a2_;
};

// Dimensionless complex interaction strength (pulse area divided by hbar,
// with hbar = 1 throughout the library).
class Coupling {
 public:
  Coupling() : k_(0.0, 0.0) {}

  // Throws NonFiniteInput.
  explicit Coupling(ComplexScalar k);
  Coupling(double re, double im) : Coupling(ComplexScalar(re, im)) {}

  ComplexScalar value() const { return k_; }
  double modulus() const { return std::abs(k_); }
  bool is_zero() const { return k_.real() == 0.0 && k_.imag() == 0.0; }

  // Argument of k in (-pi, pi]; 0 for k = 0.
  double phase() const;

  // Unit phase factor e^{i phase} = k/|k|; defined as 1 for k = 0 (the
  // propagator multiplies it by sin|k| = 0, so any unit value would do, but
  // a fixed convention keeps output deterministic).
  ComplexScalar unit_phase() const;

  Coupling operator-() const { return Coupling(-k_); }

 private:
  ComplexScalar k_;
};

enum class StrengthKind { Identity, SignFlip, Swap, Generic };

// Classification of a coupling whose modulus is (near) an integer multiple
// of pi/2; ell is that integer, set only when the match is within tolerance.
struct StrengthClass {
  StrengthKind kind = StrengthKind::Generic;
  std::optional<long long> ell;
};

std::string to_string(StrengthKind kind);

}  // namespace pulsekick
