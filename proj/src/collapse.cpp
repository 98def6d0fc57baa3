#include "pulsekick/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pulsekick/qcore.hpp"

namespace pulsekick {

namespace {

constexpr double kResidualTol = 1e-10;

// Builds a candidate, verifies it by applying the propagator, and appends it
// only if the state actually lands on the first eigenstate. Half of the
// sign combinations steer toward the second eigenstate instead; trying both
// and keeping the survivors makes the output independent of the square-root
// convention.
void try_candidate(const SuperpositionState& state, double R, BranchSign sign,
                   int branch_index, BranchSign arccos_sign, ComplexScalar z,
                   ComplexScalar sqrt_z, std::vector<CollapseSolution>& out) {
  if (R < 0.0) return;
  const ComplexScalar k =
      (sign == BranchSign::Plus ? R : -R) * sqrt_z;
  const SuperpositionState after = delta_propagate(state, Coupling(k));
  const double residual = std::abs(after.a2());
  if (residual >= kResidualTol) return;
  // Identical k can arise twice when R = 0 (both signs) or when the two
  // arccos branches coincide at |a1| = 0.
  for (const CollapseSolution& s : out) {
    if (s.k == k) return;
  }
  out.push_back({k, {R, sign, branch_index, arccos_sign}, z, residual});
}

}  // namespace

std::string to_string(BranchSign sign) {
  return sign == BranchSign::Plus ? "plus" : "minus";
}

std::vector<CollapseSolution> collapse_strengths(const SuperpositionState& state,
                                                 int max_branch,
                                                 CollapseTarget /*target*/) {
  if (max_branch < 0) {
    throw DomainError("branch count must be nonnegative");
  }

  const double a = std::abs(state.a1());
  const double b = std::abs(state.a2());
  const double pi = std::numbers::pi;

  std::vector<CollapseSolution> out;

  // Degenerate amplitudes leave the phase constraint undetermined (0/0);
  // the documented convention is z = 1, k real nonnegative.
  const ComplexScalar one(1.0, 0.0);
  if (b == 0.0) {
    // Already collapsed: every integer multiple of pi maps the state to
    // (+/- a1, 0), including k = 0. pi m = 2 pi (m/2) + arccos(-/+ 1).
    for (int m = 0; m <= 2 * max_branch + 1; ++m) {
      const double R = pi * m;
      const BranchSign acs = (m % 2 == 0) ? BranchSign::Plus : BranchSign::Minus;
      try_candidate(state, R, BranchSign::Plus, m / 2, acs, one, one, out);
    }
    return out;
  }
  if (a == 0.0) {
    // cos|k| = 0 suffices; the base value pi/2 repeats with period pi.
    for (int m = 0; m <= 2 * max_branch; ++m) {
      const double R = pi / 2.0 + pi * m;
      try_candidate(state, R, BranchSign::Plus, (m + 1) / 2, BranchSign::Plus,
                    one, one, out);
    }
    return out;
  }

  // Generic case: the phase of k is pinned by requiring the collapse
  // condition to be real, giving the unit number z; moduli come from
  // cos R = +/- |a1|.
  const ComplexScalar z =
      -(state.a1() / std::conj(state.a1())) * (std::conj(state.a2()) / state.a2());
  const ComplexScalar sqrt_z = std::sqrt(z);
  const double r_plus = std::acos(a);    // in [0, pi/2]
  const double r_minus = std::acos(-a);  // in [pi/2, pi]

  for (int n = 0; n <= max_branch; ++n) {
    const double offset = 2.0 * pi * n;
    for (const auto& [acs, base] :
         {std::pair{BranchSign::Plus, r_plus}, {BranchSign::Minus, r_minus}}) {
      for (const double R : {offset + base, offset - base}) {
        for (const BranchSign sign : {BranchSign::Plus, BranchSign::Minus}) {
          try_candidate(state, R, sign, n, acs, z, sqrt_z, out);
        }
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const CollapseSolution& x, const CollapseSolution& y) {
              if (x.branch.R != y.branch.R) return x.branch.R < y.branch.R;
              return x.branch.sign == BranchSign::Plus &&
                     y.branch.sign == BranchSign::Minus;
            });
  return out;
}

ComplexScalar collapsed_phase(const SuperpositionState& state,
                              const CollapseSolution& solution) {
  const double a = std::abs(state.a1());
  if (a == 0.0) {
    throw DegenerateState(
        "collapsed phase is undefined for a vanishing first amplitude");
  }
  const ComplexScalar unit = state.a1() / a;
  return solution.branch.arccos_sign == BranchSign::Plus ? unit : -unit;
}

ComplexScalar reverse_strength(const CollapseSolution& solution) {
  return -solution.k;
}

double strength_sensitivity(double alpha1_mod) {
  if (!std::isfinite(alpha1_mod)) {
    throw NonFiniteInput("amplitude modulus must be finite");
  }
  if (alpha1_mod < 0.0 || alpha1_mod >= 1.0) {
    throw DomainError(
        "sensitivity is defined for amplitude moduli in [0, 1)");
  }
  return 1.0 / std::sqrt(1.0 - alpha1_mod * alpha1_mod);
}

std::vector<BranchCurveRow> figure1_data(int num_points) {
  if (num_points < 2) {
    throw DomainError("branch-curve table needs at least two points");
  }
  std::vector<BranchCurveRow> rows;
  rows.reserve(static_cast<std::size_t>(num_points));
  for (int i = 0; i < num_points; ++i) {
    // Hit the endpoints exactly: i = last gives precisely 1.0.
    const double x = static_cast<double>(i) / (num_points - 1);
    rows.push_back({x, std::acos(x), std::acos(-x)});
  }
  return rows;
}

}  // namespace pulsekick
