#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pulsekick/types.hpp"

namespace pulsekick {

enum class PulseShape { Gaussian };

// Nascent-delta pulse family q_n(t) = (n/sqrt(pi)) exp(-n^2 t^2): unit area
// for every n, concentrating at t = 0 as n grows.
struct PulseSpec {
  double n = 1.0;
  PulseShape shape = PulseShape::Gaussian;
};

struct SystemParams {
  double omega0 = 0.0;  // energy gap (E2 - E1), nonnegative
};

struct TrajectorySample {
  double t = 0.0;
  ComplexScalar a1;
  ComplexScalar a2;
};

// Time-ordered integrator output plus the inputs that produced it.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  double n = 0.0;
  double omega0 = 0.0;
  ComplexScalar k;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
};

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double window = 8.0;  // integrate over |t| <= window / n
  std::int64_t max_steps = 10'000'000;
};

// q_n(t); throws DomainError for n <= 0, NonFiniteInput for NaN/Inf.
double gaussian_pulse(double n, double t);

// Integrates the exact coupled amplitude equations
//   da1/dt = -i k      q_n(t) e^{-i omega0 t} a2
//   da2/dt = -i conj(k) q_n(t) e^{+i omega0 t} a1
// from t = -window/n to +window/n with an adaptive embedded Runge-Kutta 5(4)
// pair under PI step-size control. The window truncates only the far pulse
// tail (erfc(8) ~ 1e-29 at the default width).
Trajectory integrate_exact(const SuperpositionState& state, const Coupling& k,
                           const SystemParams& params, const PulseSpec& pulse,
                           const IntegratorOptions& options = {});

// Closed-form amplitudes at time t for the gap-free system (omega0 = 0),
// exact at every pulse width n:
//   a1(t) = b1 cos(theta) + b2 sin(theta),  theta = |k| erf(n t) / 2
//   a2(t) = i e^{-i arg k} (b2 cos(theta) - b1 sin(theta))
// with b1, b2 fixed by the initial condition at t -> -infinity. As t -> +inf
// this reproduces delta_propagate for any n.
SuperpositionState finite_n_closed_form(const SuperpositionState& state,
                                        const Coupling& k,
                                        const PulseSpec& pulse, double t);

// One row of a delta-limit convergence table: distance between the
// integrated final state at pulse width n and the analytic delta result.
// err_state is the max component deviation after removing a global phase;
// err_prob compares the upper-state probabilities directly.
struct ConvergenceRow {
  double n = 0.0;
  double err_state = 0.0;
  double err_prob = 0.0;
  bool failed = false;
  std::string message;
};

// Runs integrate_exact for each n in ascending n_list and compares against
// delta_propagate. Integrator failures mark the row instead of throwing.
std::vector<ConvergenceRow> convergence_study(
    const SuperpositionState& state, const Coupling& k,
    const SystemParams& params, const std::vector<double>& n_list,
    const IntegratorOptions& options = {});

}  // namespace pulsekick
