#pragma once

#include "tiering/model.hpp"

namespace tiering {

// Closed-form equilibrium for uniform liquidity. The "standard" forms assume
// x ~ uniform(0,1); the shifted forms generalize to uniform(lo,hi) and reduce
// to the standard ones at (0,1).

// r* = (1-u)^2 / (u^2 + (1-u)^2); the market rate is -r*.
double rate_standard(double threshold);

// V = 1/2 * u^2 (1-u)^2 / (u^2 + (1-u)^2); symmetric about u = 0.5.
double volume_standard(double threshold);

// N = (1-u)^4 / (u^2 + (1-u)^2); liquidity still penalized after trading.
double negative_share_standard(double threshold);

// Full equilibrium for x ~ uniform(lo,hi). Thresholds outside [lo,hi] resolve
// to the one-sided corners (no borrowers -> r*=1, no lenders -> r*=0).
EquilibriumResult equilibrium_shifted(double threshold, double lo = 0.0, double hi = 1.0);

// d(-r*)/dE by central difference with the given step in u.
double rate_sensitivity(double threshold, double lo, double hi, double step = 1e-4);

// dV/dE by the same scheme, for comparing rate- and volume-curve slopes.
double volume_sensitivity(double threshold, double lo, double hi, double step = 1e-4);

}  // namespace tiering
