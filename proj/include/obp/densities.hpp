#pragma once

#include "obp/types.hpp"

namespace obp {

// log of the Lemma-style closed form
//   Gamma(theta)^{N(N+1)/2} / prod_{k<=N} Gamma(k theta) * prod_{i<j} (a_i - a_j)^{2 theta - 1},
// evaluated entirely through lgamma and log-gaps. Rejects near-degenerate
// tuples (some gap below 1e-13 * scale), where the gap powers are singular.
double log_orbital_normalization(const OrderedTuple& a, Theta theta);

// log of the normalized orbital beta density M^{a,theta} of a full-depth
// triangle (depth N-1 below the attached top of length N).
double log_orbital_density(const InterlacingArray& triangle, Theta theta,
                           BoundaryPolicy policy = BoundaryPolicy::raise);

// Gaussian beta ensemble on the Weyl chamber, with the Selberg/Mehta
// normalization evaluated in log space. Coinciding coordinates give -inf.
double log_gbe_density(const OrderedTuple& x, Theta theta);
double log_gbe_normalization(std::size_t m, Theta theta);

// Gaussian beta corners process on W_{m,corners}.
double log_gbe_corners_density(const InterlacingArray& triangle, Theta theta,
                               BoundaryPolicy policy = BoundaryPolicy::raise);
double log_gbe_corners_normalization(std::size_t m, Theta theta);

// log of the conditional density of levels 1..n given level n+1 (the
// theta-Gibbs kernel, Gamma prefactor included).
double log_theta_gibbs_conditional(const InterlacingArray& lower_levels,
                                   const OrderedTuple& given, Theta theta,
                                   BoundaryPolicy policy = BoundaryPolicy::raise);

// One-step Markov kernel from level n+1 (tuple a) to level n (tuple x):
//   Gamma((n+1)theta)/Gamma(theta)^{n+1} * prod_{i<j}(a_i-a_j)^{1-2theta}
//   * prod_{i<j}(x_i-x_j) * prod_{s,r}|a_s-x_r|^{theta-1}.
// The constant is cross-checked by a quadrature oracle in the test suite.
double log_corner_kernel(const OrderedTuple& a, const OrderedTuple& x, Theta theta,
                         BoundaryPolicy policy = BoundaryPolicy::raise);

}  // namespace obp
