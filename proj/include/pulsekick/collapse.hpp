#pragma once

#include <vector>

#include "pulsekick/types.hpp"

namespace pulsekick {

enum class BranchSign { Plus, Minus };

std::string to_string(BranchSign sign);

// One member of the collapse modulus family R = 2 pi n +/- arccos(+/-|a1|).
// R stores the assembled nonnegative modulus; sign is the overall +/- in
// k = +/- R sqrt(z); arccos_sign is the +/- inside the arccos.
struct CollapseBranch {
  double R = 0.0;
  BranchSign sign = BranchSign::Plus;
  int branch_index = 0;
  BranchSign arccos_sign = BranchSign::Plus;
};

// A verified strength that collapses the state onto the first eigenstate:
// applying delta_propagate with k leaves |c2| = residual < 1e-10.
struct CollapseSolution {
  ComplexScalar k;
  CollapseBranch branch;
  ComplexScalar z;  // unit-modulus phase constraint; 1 by convention when
                    // either amplitude vanishes
  double residual = 0.0;
};

enum class CollapseTarget { Eigenstate1 };

// Enumerates every strength with modulus <= 2 pi max_branch + pi that drives
// the state to the first eigenstate. Candidates k = +/- R sqrt(z) with
// z = -(a1/conj(a1)) (conj(a2)/a2) are verified by applying the propagator;
// only candidates with residual < 1e-10 are returned (for a generic state,
// exactly one overall sign survives per modulus). Degenerate inputs use the
// documented real-positive phase convention: a2 = 0 yields the family
// |k| in {0, pi, 2 pi, ...}; a1 = 0 yields {pi/2 + offsets}.
std::vector<CollapseSolution> collapse_strengths(
    const SuperpositionState& state, int max_branch,
    CollapseTarget target = CollapseTarget::Eigenstate1);

// Phase of the collapsed state: +/- a1/|a1| with the sign taken from the
// solution's arccos branch. Throws DegenerateState when a1 = 0 (the phase is
// then read off delta_propagate directly instead).
ComplexScalar collapsed_phase(const SuperpositionState& state,
                              const CollapseSolution& solution);

// Strength that undoes the collapse: -k. Propagating the collapsed state
// with it restores the original superposition.
ComplexScalar reverse_strength(const CollapseSolution& solution);

// |d|k|/d|a1|| = 1/sqrt(1 - |a1|^2) along a collapse branch; grows without
// bound as |a1| -> 1. Throws DomainError at |a1| = 1 and outside [0, 1).
double strength_sensitivity(double alpha1_mod);

// Row of the branch-curve table: base collapse moduli for both arccos signs
// as a function of |a1|. The two columns always sum to pi.
struct BranchCurveRow {
  double alpha1_mod = 0.0;
  double kmod_plus = 0.0;
  double kmod_minus = 0.0;
};

// Uniform table of the two base branch curves on |a1| in [0, 1]:
// kmod_plus = arccos(+|a1|) falling from pi/2 to 0, kmod_minus =
// arccos(-|a1|) rising from pi/2 to pi. num_points >= 2.
std::vector<BranchCurveRow> figure1_data(int num_points);

}  // namespace pulsekick
