#pragma once

#include "obp/types.hpp"

namespace obp::oracles {

// Direct quadrature of the unnormalized interlacing product over P(a),
// N <= 3. Independent of the closed-form constant it is checked against.
double orbital_unnormalized_mass(const OrderedTuple& a, Theta theta, double rel_tol = 1e-8);

// Total mass of exp(log_theta_gibbs_conditional) over the two levels below a
// given level of length 3 (a 3-dimensional integral).
double gibbs_conditional_mass(const OrderedTuple& given, Theta theta, double rel_tol = 1e-6);

// Total mass of exp(log_corner_kernel) over the interlacing slab below a
// level of length 3 (2-dimensional).
double corner_kernel_mass(const OrderedTuple& a, Theta theta, double rel_tol = 1e-8);

// Total mass of the rank-2 GbE density over the Weyl chamber (2-dimensional,
// Gaussian tails truncated at a bound driven by rel_tol).
double gbe_mass_m2(Theta theta, double rel_tol = 1e-8);

// Total mass of the 2-level Gaussian beta corners density (3-dimensional).
double gbe_corners_mass_m2(Theta theta, double rel_tol = 1e-5);

// Marginal CDF of the lower coordinate x_1 under the n = 2 corner kernel,
// by 2-d quadrature; used as a histogram oracle for the MCMC sampler.
double corner_kernel_x1_cdf(const OrderedTuple& a, Theta theta, double t);

}  // namespace obp::oracles
