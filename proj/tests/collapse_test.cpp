// Collapse-strength enumeration tests.
//
// Analytic references:
//   [phase constraint] Driving (a1, a2) to the first eigenstate requires
//     k = +/- R sqrt(z) with z = -(a1/conj(a1)) (conj(a2)/a2), |z| = 1.
//   [modulus families] cos R = +/- |a1| gives R in {2 pi n +/- arccos(|a1|)}
//     and {2 pi n +/- arccos(-|a1|)}; applying the propagator keeps exactly
//     one overall sign per modulus for a generic state.
//   [worked example 1] (1, i)/sqrt(2): z = 1, collapse strengths are the
//     real solutions of tan k = 1 for k > 0 and tan|k| = -1 for k < 0,
//     i.e. +pi/4, -3pi/4, +5pi/4, -7pi/4, +9pi/4, -11pi/4, ...
//   [worked example 2] (0.6, 0.8): z = -1, sqrt(z) = i, base moduli
//     arccos(0.6) = 0.92729521800161223 and arccos(-0.6) = 2.21429743558818101.
//   [sensitivity]      d|k|/d|a1| along a branch = 1/sqrt(1 - |a1|^2);
//     1.25 at 0.6, 7.08881205008335901 at 0.99.
//   [branch curves]    arccos(x) + arccos(-x) = pi identically.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "pulsekick/collapse.hpp"
#include "pulsekick/qcore.hpp"
#include "support.hpp"

using pulsekick::BranchSign;
using pulsekick::CollapseSolution;
using pulsekick::ComplexScalar;
using pulsekick::Coupling;
using pulsekick::SuperpositionState;

namespace {

constexpr double kPi = std::numbers::pi;

// Random state with both amplitude moduli bounded away from zero, so the
// generic (non-degenerate) enumeration path is exercised.
SuperpositionState generic_state(testsupport::Rng& rng) {
  const double mix = rng.uniform(0.15, kPi / 2.0 - 0.15);
  const ComplexScalar a1 = std::polar(std::cos(mix), rng.uniform(-kPi, kPi));
  const ComplexScalar a2 = std::polar(std::sin(mix), rng.uniform(-kPi, kPi));
  return SuperpositionState::checked(a1, a2);
}

double collapse_residual(const SuperpositionState& state, ComplexScalar k) {
  return std::abs(pulsekick::delta_propagate(state, Coupling(k)).a2());
}

}  // namespace

// ---------------------------------------------------------------------------
// Worked example: (1, i)/sqrt(2), real strengths
// ---------------------------------------------------------------------------

TEST_CASE("collapse_strengths: equal-weight state yields odd multiples of pi/4") {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const auto state =
      SuperpositionState::checked({inv_sqrt2, 0.0}, {0.0, inv_sqrt2});
  const auto sols = pulsekick::collapse_strengths(state, 1);

  // 2 base solutions plus 4 per extra branch, alternating overall sign.
  REQUIRE(sols.size() == 6);
  const double expected_mod[] = {kPi / 4.0, 3.0 * kPi / 4.0, 5.0 * kPi / 4.0,
                                 7.0 * kPi / 4.0, 9.0 * kPi / 4.0,
                                 11.0 * kPi / 4.0};
  const double expected_sign[] = {1.0, -1.0, 1.0, -1.0, 1.0, -1.0};
  for (std::size_t i = 0; i < sols.size(); ++i) {
    // z = 1: strengths are real.
    CHECK(std::abs(sols[i].z - ComplexScalar(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(sols[i].k.imag()) < 1e-14);
    CHECK(sols[i].k.real() ==
          doctest::Approx(expected_sign[i] * expected_mod[i]).epsilon(1e-13));
    CHECK(sols[i].branch.R == doctest::Approx(expected_mod[i]).epsilon(1e-13));
    CHECK(sols[i].residual < 1e-10);
  }
  CHECK(sols[0].branch.branch_index == 0);
  CHECK(sols[1].branch.branch_index == 0);
  CHECK(sols[2].branch.branch_index == 1);
  CHECK(sols[5].branch.branch_index == 1);
}

// ---------------------------------------------------------------------------
// Worked example: (0.6, 0.8), imaginary strengths
// ---------------------------------------------------------------------------

TEST_CASE("collapse_strengths: (0.6, 0.8) collapses along the imaginary axis") {
  const auto state = SuperpositionState::checked({0.6, 0.0}, {0.8, 0.0});
  const auto sols = pulsekick::collapse_strengths(state, 0);

  REQUIRE(sols.size() == 2);
  // z = -1, principal sqrt(z) = i.
  CHECK(std::abs(sols[0].z - ComplexScalar(-1.0, 0.0)) < 1e-14);

  CHECK(sols[0].branch.R ==
        doctest::Approx(0.92729521800161223243).epsilon(1e-14));
  CHECK(sols[0].branch.sign == BranchSign::Plus);
  CHECK(sols[0].branch.arccos_sign == BranchSign::Plus);
  CHECK(std::abs(sols[0].k - ComplexScalar(0.0, 0.92729521800161223243)) <
        1e-13);

  CHECK(sols[1].branch.R ==
        doctest::Approx(2.21429743558818100604).epsilon(1e-14));
  CHECK(sols[1].branch.sign == BranchSign::Minus);
  CHECK(sols[1].branch.arccos_sign == BranchSign::Minus);
  CHECK(std::abs(sols[1].k - ComplexScalar(0.0, -2.21429743558818100604)) <
        1e-13);

  for (const auto& sol : sols) {
    CHECK(sol.residual < 1e-10);
    // Flipping the overall sign must not collapse the state.
    CHECK(collapse_residual(state, -sol.k) > 1e-3);
  }
}

// ---------------------------------------------------------------------------
// Post-conditions on random states
// ---------------------------------------------------------------------------

TEST_CASE("collapse_strengths: every returned solution is verified and unique per modulus") {
  testsupport::Rng rng(2101);
  for (int trial = 0; trial < 100; ++trial) {
    const auto state = generic_state(rng);
    const int max_branch = trial % 3;
    const auto sols = pulsekick::collapse_strengths(state, max_branch);

    // 2 per base branch, 4 per 2 pi shell above it.
    CHECK(sols.size() == 2 + 4 * static_cast<std::size_t>(max_branch));
    for (std::size_t i = 0; i < sols.size(); ++i) {
      const auto after =
          pulsekick::delta_propagate(state, Coupling(sols[i].k));
      CHECK(std::abs(after.a2()) < 1e-10);
      CHECK(std::abs(std::abs(after.a1()) - 1.0) < 1e-10);
      CHECK(std::abs(sols[i].k) ==
            doctest::Approx(sols[i].branch.R).epsilon(1e-12));
      CHECK(std::abs(sols[i].branch.R) <= 2.0 * kPi * max_branch + kPi + 1e-9);
      if (i > 0) {
        // Sorted by modulus, one solution per modulus.
        CHECK(sols[i].branch.R > sols[i - 1].branch.R + 1e-6);
      }
    }
  }
}

TEST_CASE("collapse_strengths: the opposite overall sign misses the target") {
  testsupport::Rng rng(2202);
  for (int trial = 0; trial < 50; ++trial) {
    const auto state = generic_state(rng);
    for (const auto& sol : pulsekick::collapse_strengths(state, 1)) {
      // At the flipped sign the residual is 2|a1||a2||sin R| up to phase,
      // bounded away from zero for the states drawn here.
      CHECK(collapse_residual(state, -sol.k) > 1e-8);
    }
  }
}

// ---------------------------------------------------------------------------
// Completeness: a dense scan over the strength line finds no extra zeros
// ---------------------------------------------------------------------------

TEST_CASE("collapse_strengths: dense scan finds exactly the enumerated strengths") {
  testsupport::Rng rng(2303);
  const int max_branch = 2;
  const double r_max = 2.0 * kPi * max_branch + kPi;

  for (int trial = 0; trial < 5; ++trial) {
    const auto state = generic_state(rng);
    const auto sols = pulsekick::collapse_strengths(state, max_branch);
    REQUIRE(sols.size() == 10);

    // All candidates live on the line k = x sqrt(z), x real.
    const ComplexScalar z = -(state.a1() / std::conj(state.a1())) *
                            (std::conj(state.a2()) / state.a2());
    const ComplexScalar sqrt_z = std::sqrt(z);
    const auto residual_at = [&](double x) {
      return collapse_residual(state, x * sqrt_z);
    };

    // Signed positions of the enumerated solutions along that line.
    std::vector<double> enumerated;
    for (const auto& sol : sols) {
      enumerated.push_back(sol.branch.sign == BranchSign::Plus
                               ? sol.branch.R
                               : -sol.branch.R);
    }

    // Scan the line, refine every interior local minimum by ternary search,
    // and demand each near-zero matches an enumerated strength.
    const double step = 1e-3;
    const int grid = static_cast<int>(std::floor(2.0 * r_max / step));
    std::vector<double> zeros;
    double f_prev = residual_at(-r_max);
    double f_here = residual_at(-r_max + step);
    for (int i = 2; i <= grid; ++i) {
      const double x_next = -r_max + i * step;
      const double f_next = residual_at(x_next);
      if (f_here < f_prev && f_here <= f_next) {
        double lo = x_next - 2.0 * step;
        double hi = x_next;
        for (int iter = 0; iter < 80; ++iter) {
          const double m1 = lo + (hi - lo) / 3.0;
          const double m2 = hi - (hi - lo) / 3.0;
          if (residual_at(m1) < residual_at(m2)) {
            hi = m2;
          } else {
            lo = m1;
          }
        }
        const double x_min = 0.5 * (lo + hi);
        if (residual_at(x_min) < 1e-8) {
          zeros.push_back(x_min);
        }
      }
      f_prev = f_here;
      f_here = f_next;
    }

    CHECK(zeros.size() == enumerated.size());
    for (const double zero : zeros) {
      double best = 1e300;
      for (const double x : enumerated) {
        best = std::min(best, std::abs(zero - x));
      }
      CHECK(best < 1e-6);
    }
  }
}

// ---------------------------------------------------------------------------
// Collapsed phase and the reverse pulse
// ---------------------------------------------------------------------------

TEST_CASE("collapsed_phase: (0.6, 0.8) lands on +1 or -1 by arccos branch") {
  const auto state = SuperpositionState::checked({0.6, 0.0}, {0.8, 0.0});
  const auto sols = pulsekick::collapse_strengths(state, 0);
  REQUIRE(sols.size() == 2);

  CHECK(std::abs(pulsekick::collapsed_phase(state, sols[0]) -
                 ComplexScalar(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(pulsekick::collapsed_phase(state, sols[1]) -
                 ComplexScalar(-1.0, 0.0)) < 1e-14);

  // The predicted phase is the propagated first amplitude.
  for (const auto& sol : sols) {
    const auto after = pulsekick::delta_propagate(state, Coupling(sol.k));
    CHECK(std::abs(after.a1() - pulsekick::collapsed_phase(state, sol)) <
          1e-10);
  }
}

TEST_CASE("collapsed_phase: carries the phase of the first amplitude") {
  const ComplexScalar a1 = std::polar(0.6, kPi / 3.0);
  const auto state = SuperpositionState::checked(a1, {0.8, 0.0});
  const auto sols = pulsekick::collapse_strengths(state, 0);
  REQUIRE(sols.size() == 2);

  const ComplexScalar unit = std::polar(1.0, kPi / 3.0);
  for (const auto& sol : sols) {
    const auto phase = pulsekick::collapsed_phase(state, sol);
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-14);
    const ComplexScalar expected =
        sol.branch.arccos_sign == BranchSign::Plus ? unit : -unit;
    CHECK(std::abs(phase - expected) < 1e-14);
    const auto after = pulsekick::delta_propagate(state, Coupling(sol.k));
    CHECK(std::abs(after.a1() - phase) < 1e-10);
  }
}

TEST_CASE("reverse_strength undoes the collapse on random states") {
  testsupport::Rng rng(2404);
  for (int trial = 0; trial < 300; ++trial) {
    const auto state = generic_state(rng);
    for (const auto& sol : pulsekick::collapse_strengths(state, trial % 2)) {
      const auto collapsed =
          pulsekick::delta_propagate(state, Coupling(sol.k));
      const auto recovered = pulsekick::delta_propagate(
          collapsed, Coupling(pulsekick::reverse_strength(sol)));
      CHECK(testsupport::state_distance(recovered, state) < 1e-10);
    }
  }
}

// ---------------------------------------------------------------------------
// Degenerate amplitudes
// ---------------------------------------------------------------------------

TEST_CASE("collapse_strengths: an already collapsed state gets multiples of pi") {
  const SuperpositionState ground;  // (1, 0)
  const auto sols = pulsekick::collapse_strengths(ground, 1);

  REQUIRE(sols.size() == 4);  // 0, pi, 2 pi, 3 pi
  for (std::size_t i = 0; i < sols.size(); ++i) {
    CHECK(std::abs(sols[i].k - ComplexScalar(i * kPi, 0.0)) < 1e-14);
    CHECK(sols[i].residual < 1e-10);
    CHECK(std::abs(sols[i].z - ComplexScalar(1.0, 0.0)) < 1e-14);
    // Even multiples preserve the amplitude sign, odd ones flip it.
    CHECK(sols[i].branch.arccos_sign ==
          (i % 2 == 0 ? BranchSign::Plus : BranchSign::Minus));
  }
  CHECK(sols[0].branch.branch_index == 0);
  CHECK(sols[2].branch.branch_index == 1);

  // The convention is phase independent: i * (1, 0) gets the same strengths.
  const auto rotated = SuperpositionState::checked({0.0, 1.0}, {0.0, 0.0});
  const auto rotated_sols = pulsekick::collapse_strengths(rotated, 1);
  REQUIRE(rotated_sols.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(rotated_sols[i].k - sols[i].k) < 1e-14);
  }
}

TEST_CASE("collapse_strengths: a fully excited state gets pi/2 plus multiples of pi") {
  const auto excited = SuperpositionState::checked({0.0, 0.0}, {1.0, 0.0});
  const auto sols = pulsekick::collapse_strengths(excited, 1);

  REQUIRE(sols.size() == 3);  // pi/2, 3 pi/2, 5 pi/2
  for (std::size_t i = 0; i < sols.size(); ++i) {
    CHECK(std::abs(sols[i].k - ComplexScalar(kPi / 2.0 + i * kPi, 0.0)) <
          1e-13);
    CHECK(sols[i].residual < 1e-10);
  }
  CHECK(sols[0].branch.branch_index == 0);
  CHECK(sols[1].branch.branch_index == 1);
  CHECK(sols[2].branch.branch_index == 1);

  // No first-amplitude phase exists to report.
  CHECK_THROWS_AS(pulsekick::collapsed_phase(excited, sols[0]),
                  pulsekick::DegenerateState);
}

TEST_CASE("collapse_strengths rejects a negative branch count") {
  CHECK_THROWS_AS(pulsekick::collapse_strengths(SuperpositionState(), -1),
                  pulsekick::DomainError);
}

// ---------------------------------------------------------------------------
// Sensitivity of the strength to the amplitude modulus
// ---------------------------------------------------------------------------

TEST_CASE("strength_sensitivity: fixed values and divergence toward |a1| = 1") {
  CHECK(pulsekick::strength_sensitivity(0.0) == 1.0);
  CHECK(pulsekick::strength_sensitivity(0.6) ==
        doctest::Approx(1.25).epsilon(1e-15));
  CHECK(pulsekick::strength_sensitivity(0.99) ==
        doctest::Approx(7.08881205008335900770).epsilon(1e-14));
  CHECK(pulsekick::strength_sensitivity(0.999999) > 700.0);
}

TEST_CASE("strength_sensitivity matches the slope of the branch curve") {
  // kmod_plus(x) = arccos(x), so |d kmod/dx| = 1/sqrt(1-x^2).
  const double x = 0.37;
  const double h = 1e-6;
  const double slope =
      (std::acos(x - h) - std::acos(x + h)) / (2.0 * h);
  CHECK(pulsekick::strength_sensitivity(x) ==
        doctest::Approx(slope).epsilon(1e-9));
}

TEST_CASE("strength_sensitivity rejects out-of-domain input") {
  CHECK_THROWS_AS(pulsekick::strength_sensitivity(1.0), pulsekick::DomainError);
  CHECK_THROWS_AS(pulsekick::strength_sensitivity(1.5), pulsekick::DomainError);
  CHECK_THROWS_AS(pulsekick::strength_sensitivity(-0.1),
                  pulsekick::DomainError);
  CHECK_THROWS_AS(pulsekick::strength_sensitivity(std::nan("")),
                  pulsekick::NonFiniteInput);
}

// ---------------------------------------------------------------------------
// Branch curves
// ---------------------------------------------------------------------------

TEST_CASE("figure1_data: endpoints, midpoint, and the pi sum rule") {
  const auto rows = pulsekick::figure1_data(3);
  REQUIRE(rows.size() == 3);

  CHECK(rows[0].alpha1_mod == 0.0);
  CHECK(rows[0].kmod_plus == doctest::Approx(kPi / 2.0).epsilon(1e-15));
  CHECK(rows[0].kmod_minus == doctest::Approx(kPi / 2.0).epsilon(1e-15));

  CHECK(rows[1].alpha1_mod == 0.5);
  CHECK(rows[1].kmod_plus ==
        doctest::Approx(1.04719755119659774615).epsilon(1e-15));  // pi/3
  CHECK(rows[1].kmod_minus ==
        doctest::Approx(2.09439510239319549231).epsilon(1e-15));  // 2 pi/3

  CHECK(rows[2].alpha1_mod == 1.0);
  CHECK(rows[2].kmod_plus == 0.0);  // arccos(1) is exact
  CHECK(rows[2].kmod_minus == doctest::Approx(kPi).epsilon(1e-15));
}

TEST_CASE("figure1_data: curves are monotone and sum to pi") {
  const auto rows = pulsekick::figure1_data(101);
  REQUIRE(rows.size() == 101);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::abs(rows[i].kmod_plus + rows[i].kmod_minus - kPi) < 1e-12);
    if (i > 0) {
      CHECK(rows[i].alpha1_mod > rows[i - 1].alpha1_mod);
      CHECK(rows[i].kmod_plus < rows[i - 1].kmod_plus);
      CHECK(rows[i].kmod_minus > rows[i - 1].kmod_minus);
    }
  }
  // The curves are the base collapse moduli: spot-check against the
  // enumeration at |a1| = 0.6.
  const auto state = SuperpositionState::checked({0.6, 0.0}, {0.8, 0.0});
  const auto sols = pulsekick::collapse_strengths(state, 0);
  const auto& mid = rows[60];  // alpha1_mod = 0.6
  CHECK(mid.alpha1_mod == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(mid.kmod_plus == doctest::Approx(sols[0].branch.R).epsilon(1e-13));
  CHECK(mid.kmod_minus == doctest::Approx(sols[1].branch.R).epsilon(1e-13));
}

TEST_CASE("figure1_data rejects tables with fewer than two points") {
  CHECK_THROWS_AS(pulsekick::figure1_data(1), pulsekick::DomainError);
  CHECK_THROWS_AS(pulsekick::figure1_data(0), pulsekick::DomainError);
  CHECK_THROWS_AS(pulsekick::figure1_data(-5), pulsekick::DomainError);
}
