#include "pulsekick/oracle.hpp"

#include <cmath>
#include <numbers>

#include "pulsekick/pulsesim.hpp"

namespace pulsekick {

ExpFormConstant exp_form_constant(const SuperpositionState& state,
                                  const Coupling& k, LogArgSign arg_sign) {
  if (k.is_zero()) {
    throw ZeroCoupling(
        "exponential-form constant is undefined at zero coupling");
  }
  const ComplexScalar kc = std::conj(k.value());
  const double km = k.modulus();
  const double sgn = arg_sign == LogArgSign::Plus ? 1.0 : -1.0;
  const ComplexScalar arg = kc * state.a1() + sgn * km * state.a2();
  if (arg == ComplexScalar(0.0, 0.0)) {
    throw DegenerateLog("logarithm argument vanished for this state");
  }
  // Principal logarithm and square root; the 2 pi i branch shifts cancel in
  // the final exponentials, so branch 0 is used throughout.
  const ComplexScalar d =
      (std::log(arg) - ComplexScalar(0.0, km / 2.0)) / std::sqrt(kc);
  return {d, 0};
}

std::pair<ComplexScalar, ComplexScalar> exp_form_amplitudes(
    const SuperpositionState& state, const Coupling& k,
    const ExpFormConstant& constant, double erf_value) {
  if (k.is_zero()) {
    throw ZeroCoupling(
        "exponential-form amplitudes are undefined at zero coupling");
  }
  const ComplexScalar kv = k.value();
  const ComplexScalar kc = std::conj(kv);
  const double km = k.modulus();
  const ComplexScalar a1 = state.a1();
  const ComplexScalar a2 = state.a2();

  const ComplexScalar u =
      constant.d * std::sqrt(kc) +
      ComplexScalar(0.0, 2.0 * std::numbers::pi * constant.log_branch);
  const ComplexScalar half_phase(0.0, km * erf_value / 2.0);
  const ComplexScalar grow = std::exp(u - half_phase);
  const ComplexScalar decay = std::exp(-u + half_phase);

  const ComplexScalar c1 =
      0.5 * (a1 * a1 * kc - a2 * a2 * kv) * decay + grow / (2.0 * kc);
  const ComplexScalar c2 =
      (kc * (a2 * a2 * kv - a1 * a1 * kc) * decay + grow) / (2.0 * km);
  return {c1, c2};
}

SuperpositionState exp_form_propagate(const SuperpositionState& state,
                                      const Coupling& k) {
  if (k.is_zero()) {
    return state;  // no pulse; the constant is not needed
  }
  const ExpFormConstant constant = exp_form_constant(state, k);
  const auto [c1, c2] = exp_form_amplitudes(state, k, constant, 1.0);
  return SuperpositionState::checked(c1, c2, 1e-9);
}

double conserved_quadratic_residual(const Trajectory& trajectory,
                                    const SuperpositionState& state0,
                                    const Coupling& k) {
  if (trajectory.omega0 != 0.0) {
    throw DomainError(
        "the quadratic is conserved only on gap-free trajectories");
  }
  const ComplexScalar kv = k.value();
  const ComplexScalar kc = std::conj(kv);
  const ComplexScalar a1sq = state0.a1() * state0.a1();
  const ComplexScalar a2sq = state0.a2() * state0.a2();
  double worst = 0.0;
  for (const TrajectorySample& s : trajectory.samples) {
    const ComplexScalar lhs = kc * (s.a1 * s.a1 - a1sq);
    const ComplexScalar rhs = kv * (s.a2 * s.a2 - a2sq);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace pulsekick
