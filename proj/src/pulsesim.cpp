#include "pulsekick/pulsesim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "pulsekick/qcore.hpp"

namespace pulsekick {

namespace {

constexpr ComplexScalar kImag(0.0, 1.0);

using State2 = std::array<ComplexScalar, 2>;

bool all_finite(const State2& y) { return is_finite(y[0]) && is_finite(y[1]); }

// Right-hand side of the coupled amplitude equations.
struct AmplitudeRhs {
  ComplexScalar k;
  double omega0;
  double n;

  State2 operator()(double t, const State2& y) const {
    const double q = gaussian_pulse(n, t);
    const ComplexScalar rot = std::polar(1.0, omega0 * t);  // e^{+i w0 t}
    return {-kImag * k * q * std::conj(rot) * y[1],
            -kImag * std::conj(k) * q * rot * y[0]};
  }
};

// Dormand-Prince 5(4) embedded pair. Classic coefficients; the 5th-order
// solution propagates (local extrapolation) and the embedded 4th-order
// difference drives the error estimate. First-same-as-last: stage 7 equals
// the right-hand side at the accepted point.
struct DormandPrince {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // 5th-order minus embedded 4th-order weights.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

struct StepResult {
  State2 y;
  State2 err;
  State2 rhs_end;  // FSAL stage, reusable when the step is accepted
};

template <typename Rhs>
StepResult dp45_step(const Rhs& f, double t, const State2& y,
                     const State2& k1, double h) {
  using T = DormandPrince;
  State2 w;
  for (int i = 0; i < 2; ++i) w[i] = y[i] + h * (T::a21 * k1[i]);
  const State2 k2 = f(t + T::c2 * h, w);
  for (int i = 0; i < 2; ++i)
    w[i] = y[i] + h * (T::a31 * k1[i] + T::a32 * k2[i]);
  const State2 k3 = f(t + T::c3 * h, w);
  for (int i = 0; i < 2; ++i)
    w[i] = y[i] + h * (T::a41 * k1[i] + T::a42 * k2[i] + T::a43 * k3[i]);
  const State2 k4 = f(t + T::c4 * h, w);
  for (int i = 0; i < 2; ++i)
    w[i] = y[i] + h * (T::a51 * k1[i] + T::a52 * k2[i] + T::a53 * k3[i] +
                       T::a54 * k4[i]);
  const State2 k5 = f(t + T::c5 * h, w);
  for (int i = 0; i < 2; ++i)
    w[i] = y[i] + h * (T::a61 * k1[i] + T::a62 * k2[i] + T::a63 * k3[i] +
                       T::a64 * k4[i] + T::a65 * k5[i]);
  const State2 k6 = f(t + h, w);
  StepResult out;
  for (int i = 0; i < 2; ++i) {
    out.y[i] = y[i] + h * (T::b1 * k1[i] + T::b3 * k3[i] + T::b4 * k4[i] +
                           T::b5 * k5[i] + T::b6 * k6[i]);
  }
  const State2 k7 = f(t + h, out.y);
  for (int i = 0; i < 2; ++i) {
    out.err[i] = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] +
                      T::e5 * k5[i] + T::e6 * k6[i] + T::e7 * k7[i]);
  }
  out.rhs_end = k7;
  return out;
}

// Scaled RMS norm of the local error estimate over the two complex
// components.
double error_norm(const State2& err, const State2& y0, const State2& y1,
                  double rel_tol, double abs_tol) {
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double scale =
        abs_tol + rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = std::abs(err[i]) / scale;
    sum += r * r;
  }
  return std::sqrt(sum / 2.0);
}

}  // namespace

double gaussian_pulse(double n, double t) {
  if (!std::isfinite(n) || !std::isfinite(t)) {
    throw NonFiniteInput("pulse arguments must be finite");
  }
  if (!(n > 0.0)) {
    throw DomainError("pulse width parameter must be positive");
  }
  const double x = n * t;
  return n * std::numbers::inv_sqrtpi * std::exp(-x * x);
}

Trajectory integrate_exact(const SuperpositionState& state, const Coupling& k,
                           const SystemParams& params, const PulseSpec& pulse,
                           const IntegratorOptions& options) {
  if (!(pulse.n > 0.0) || !std::isfinite(pulse.n)) {
    throw DomainError("pulse width parameter must be positive");
  }
  if (!(params.omega0 >= 0.0) || !std::isfinite(params.omega0)) {
    throw DomainError("energy gap must be nonnegative");
  }
  if (!(options.rel_tol > 0.0) || options.rel_tol > 1e-4 ||
      !(options.abs_tol > 0.0) || options.abs_tol > 1e-4) {
    throw DomainError("tolerances must lie in (0, 1e-4]");
  }
  if (!(options.window > 0.0) || !std::isfinite(options.window)) {
    throw DomainError("integration window must be positive");
  }

  const double t_end = options.window / pulse.n;
  const double t_begin = -t_end;
  const AmplitudeRhs rhs{k.value(), params.omega0, pulse.n};

  Trajectory traj;
  traj.n = pulse.n;
  traj.omega0 = params.omega0;
  traj.k = k.value();
  traj.rel_tol = options.rel_tol;
  traj.abs_tol = options.abs_tol;

  State2 y{state.a1(), state.a2()};
  double t = t_begin;
  traj.samples.push_back({t, y[0], y[1]});

  // Conservative first step; the controller grows it geometrically through
  // the flat pulse tail.
  double h = (t_end - t_begin) / 100.0;
  State2 k1 = rhs(t, y);

  // PI controller in the standard Hairer form: step exponent for order 5
  // with a small integral term. err_prev carries the previous accepted
  // error.
  constexpr double kSafety = 0.9;
  constexpr double kBeta = 0.04;
  constexpr double kAlpha = 0.2 - 0.75 * kBeta;
  constexpr double kMinFactor = 0.2;
  constexpr double kMaxFactor = 5.0;
  double err_prev = 1e-4;
  bool rejected = false;

  for (std::int64_t step = 0;; ++step) {
    if (step >= options.max_steps) {
      throw StepSizeUnderflow(
          "step budget exhausted before reaching the end of the window");
    }
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::abs(t), 1.0);
    if (h < h_min) {
      throw StepSizeUnderflow(
          "step size underflow: tolerance cannot be met at this point");
    }
    bool last = false;
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    }

    const StepResult r = dp45_step(rhs, t, y, k1, h);
    const double err =
        error_norm(r.err, y, r.y, options.rel_tol, options.abs_tol);

    if (err <= 1.0) {
      t = last ? t_end : t + h;
      y = r.y;
      k1 = r.rhs_end;
      if (!all_finite(y)) {
        throw NonFiniteState("amplitudes became non-finite");
      }
      traj.samples.push_back({t, y[0], y[1]});
      if (last) break;
      double factor = kSafety * std::pow(err, -kAlpha) * std::pow(err_prev, kBeta);
      factor = std::clamp(factor, kMinFactor, kMaxFactor);
      if (rejected) factor = std::min(factor, 1.0);
      h *= factor;
      err_prev = std::max(err, 1e-4);
      rejected = false;
    } else {
      const double factor =
          std::clamp(kSafety * std::pow(err, -kAlpha), kMinFactor, 1.0);
      h *= factor;
      rejected = true;
    }
  }
  return traj;
}

SuperpositionState finite_n_closed_form(const SuperpositionState& state,
                                        const Coupling& k,
                                        const PulseSpec& pulse, double t) {
  if (!(pulse.n > 0.0) || !std::isfinite(pulse.n)) {
    throw DomainError("pulse width parameter must be positive");
  }
  if (!std::isfinite(t)) {
    throw NonFiniteInput("time must be finite");
  }
  const double km = k.modulus();
  const ComplexScalar u = k.unit_phase();
  const double ch = std::cos(km / 2.0);
  const double sh = std::sin(km / 2.0);
  // Constants fixed by the state at t -> -infinity (erf -> -1).
  const ComplexScalar b1 = state.a1() * ch - kImag * state.a2() * u * sh;
  const ComplexScalar b2 = -state.a1() * sh - kImag * state.a2() * u * ch;
  const double theta = km * std::erf(pulse.n * t) / 2.0;
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const ComplexScalar c1 = b1 * ct + b2 * st;
  const ComplexScalar c2 = kImag * std::conj(u) * (b2 * ct - b1 * st);
  return SuperpositionState::checked(c1, c2, 1e-12);
}

std::vector<ConvergenceRow> convergence_study(
    const SuperpositionState& state, const Coupling& k,
    const SystemParams& params, const std::vector<double>& n_list,
    const IntegratorOptions& options) {
  if (n_list.empty()) {
    throw DomainError("the list of pulse widths must be nonempty");
  }
  if (!std::is_sorted(n_list.begin(), n_list.end())) {
    throw DomainError("the list of pulse widths must be ascending");
  }

  const SuperpositionState target = delta_propagate(state, k);
  // Global-phase alignment pivots on the larger target component so the
  // quotient is well conditioned.
  const bool pivot_a1 = std::abs(target.a1()) >= std::abs(target.a2());

  std::vector<ConvergenceRow> rows;
  rows.reserve(n_list.size());
  for (const double n : n_list) {
    ConvergenceRow row;
    row.n = n;
    try {
      PulseSpec pulse{n, PulseShape::Gaussian};
      const Trajectory traj =
          integrate_exact(state, k, params, pulse, options);
      const TrajectorySample& fin = traj.samples.back();

      row.err_prob = std::abs(std::norm(fin.a2) - target.p2());

      const ComplexScalar num = pivot_a1 ? fin.a1 : fin.a2;
      const ComplexScalar ref = pivot_a1 ? target.a1() : target.a2();
      ComplexScalar phase(1.0, 0.0);
      if (std::abs(num) > 0.0) {
        phase = ref / num;
        phase /= std::abs(phase);
      }
      row.err_state = std::max(std::abs(fin.a1 * phase - target.a1()),
                               std::abs(fin.a2 * phase - target.a2()));
    } catch (const Error& e) {
      row.failed = true;
      row.message = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pulsekick
