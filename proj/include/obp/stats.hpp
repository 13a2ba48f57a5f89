#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "obp/types.hpp"

namespace obp::stats {

// Kolmogorov tail function Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct KsResult {
  double d = 0.0;
  double p = 1.0;
};

// Two-sided two-sample Kolmogorov-Smirnov statistic with the asymptotic
// p-value (effective-n form with the usual small-sample correction).
KsResult ks_two_sample(std::vector<double> x, std::vector<double> y);

// One-sample KS against a continuous reference CDF.
KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);

// Regularized incomplete beta I_x(a, b) by Lentz continued fraction.
double regularized_incomplete_beta(double a, double b, double x);
double beta_cdf(double x, double a, double b);
double normal_cdf(double x, double mu = 0.0, double sigma = 1.0);

MCEstimate mc_estimate(std::span<const std::complex<double>> draws);
MCEstimate mc_estimate_real(std::span<const double> draws);

// Inverse-variance weighted merge of independent estimates of one quantity;
// falls back to n-weighted pooling if any stderr is zero.
MCEstimate merge_inverse_variance(std::span<const MCEstimate> parts);

// k-th raw sample moment together with its Monte Carlo standard error.
MCEstimate sample_moment(std::span<const double> xs, int k);

}  // namespace obp::stats
