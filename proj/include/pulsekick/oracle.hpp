#pragma once

#include <utility>

#include "pulsekick/types.hpp"

namespace pulsekick {

// Independent checking route for the delta propagator. The pulse response is
// solved through the conserved quadratic
//   conj(k) (a1(t)^2 - a1(0)^2) = k (a2(t)^2 - a2(0)^2)
// which turns the coupled system into a single ODE whose solution is a pair
// of exponentials in d sqrt(conj(k)) -/+ i |k| erf(n t)/2. The route shares
// no intermediate expressions with the trigonometric form in qcore, which is
// what makes the agreement between the two a meaningful cross-check.

// Which sign of the |k| a2 term enters the logarithm fixing the integration
// constant. Plus satisfies both initial conditions; Minus is the discarded
// root, which reproduces (a1, -a2) instead, and is exposed so tests can
// assert the rejection rather than assume it.
enum class LogArgSign { Plus, Minus };

// Integration constant of the exponential-form solution.
struct ExpFormConstant {
  ComplexScalar d;
  int log_branch = 0;  // integer multiple of 2 pi i added to the logarithm;
                       // cancels in the final exponentials
};

// d = (log(conj(k) a1 +/- |k| a2) + 2 pi i log_branch - i |k|/2) / sqrt(conj(k))
// with the principal logarithm and square root. Throws ZeroCoupling when
// k = 0 (the normalization is undefined; the propagator is the identity
// there) and DegenerateLog when the logarithm argument vanishes.
ExpFormConstant exp_form_constant(const SuperpositionState& state,
                                  const Coupling& k,
                                  LogArgSign arg_sign = LogArgSign::Plus);

// Evaluates the exponential-form amplitudes at a given value of erf(n t)
// in [-1, 1]: -1 recovers the initial state, +1 the post-pulse state.
std::pair<ComplexScalar, ComplexScalar> exp_form_amplitudes(
    const SuperpositionState& state, const Coupling& k,
    const ExpFormConstant& constant, double erf_value);

// Full pulse response along the exponential route; equals
// delta_propagate(state, k) within 1e-10 wherever the constant is defined,
// and is the identity map at k = 0.
SuperpositionState exp_form_propagate(const SuperpositionState& state,
                                      const Coupling& k);

struct Trajectory;  // pulsesim

// Max over trajectory samples of |conj(k)(a1^2 - a1(0)^2) - k(a2^2 - a2(0)^2)|.
// The quadratic is conserved exactly when omega0 = 0; trajectories recorded
// with a nonzero gap are rejected with DomainError.
double conserved_quadratic_residual(const Trajectory& trajectory,
                                    const SuperpositionState& state0,
                                    const Coupling& k);

}  // namespace pulsekick
