#pragma once

#include "pulsekick/types.hpp"

namespace pulsekick {

// Exact action of a delta pulse of strength k on a two-level state:
//   c1 = a1 cos|k| - i a2 e^{+i arg k} sin|k|
//   c2 = a2 cos|k| - i a1 e^{-i arg k} sin|k|
// Unitary for every complex k; the energy gap does not enter.
SuperpositionState delta_propagate(const SuperpositionState& state,
                                   const Coupling& k);

// Probability of ending in the upper eigenstate after the pulse, evaluated
// from the expanded |c2|^2 expression (moduli and interference term) rather
// than by propagating, so it can serve as a cross-check on delta_propagate.
double transition_probability(const SuperpositionState& state,
                              const Coupling& k);

// Identifies couplings whose modulus is ell * pi/2 within tol (measured on
// the ratio 2|k|/pi): ell = 0 mod 4 acts as the identity, ell = 2 mod 4
// negates both amplitudes, odd ell swaps the occupation probabilities.
StrengthClass classify_strength(const Coupling& k, double tol = 1e-9);

// Ground-state transition probability sin^2(|k|) for a delta pulse.
double p12_delta(const Coupling& k);

// Ground-state transition probability for a finite hyperbolic-secant pulse
// of height omega0_amp and width parameter `width`, against a constant gap:
//   sin^2(pi omega0_amp width / 2) / cosh^2(pi gap width / 2).
// As width -> 0 with the pulse area held fixed it converges to p12_delta.
double p12_finite(double omega0_amp, double gap, double width);

}  // namespace pulsekick
