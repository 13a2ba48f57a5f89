#pragma once

#include <complex>
#include <span>
#include <utility>

#include "obp/sampling.hpp"
#include "obp/types.hpp"

namespace obp::bessel {

using cplx = std::complex<double>;

// Deterministic multivariate Bessel values for N <= 3 by nested adaptive
// quadrature of the combinatorial (partial Fourier transform) formula. This
// is the oracle the other evaluators are checked against. y must have
// length N (pad with zeros for fewer arguments).
cplx quadrature_small(const OrderedTuple& a, std::span<const cplx> y, Theta theta);

// Monte Carlo evaluator: expectation of the telescoping exponential
// statistic over sampled triangles; y has length m <= N (implicitly padded
// with N - m zeros). Per-chain estimates are merged by inverse variance.
MCEstimate mc(const OrderedTuple& a, std::span<const cplx> y, Theta theta,
              const SamplerConfig& cfg, std::size_t draws);

struct ContourSpec {
  double abscissa = std::numeric_limits<double>::quiet_NaN();    // M; NaN = saddle point
  double truncation = std::numeric_limits<double>::quiet_NaN();  // T; NaN = adaptive
  int nodes = 0;  // fixed_gauss only: total nodes on the half line
  enum class Rule { adaptive, fixed_gauss } rule = Rule::adaptive;
};

struct ContourResult {
  cplx value{0.0, 0.0};
  double log_abs = 0.0;     // log |B|; exact even when value over/underflows
  double rel_error = 0.0;   // quadrature estimate plus the analytic tail bound
  double tail_bound = 0.0;  // relative contribution of the truncated tails
  double abscissa = 0.0;
  double truncation = 0.0;
  long evals = 0;
};

// B_a(y, 0^{N-1}) for real y != 0 through the truncated vertical-line
// contour. Requires N*theta > 1 (the deformation to a vertical line needs
// the |z|^{-N theta} decay); y < 0 is routed through the label-negation
// symmetry. Purely imaginary or genuinely complex y is not representable on
// a truncated vertical line (the tail diverges) - use mc() for that case.
ContourResult contour_m1(const OrderedTuple& a, double y, Theta theta, ContourSpec spec = {});

// theta = 0 closed form: (1/N!) sum_sigma exp(sum_i a_i y_sigma(i)), N <= 8.
cplx theta0(std::span<const cplx> a, std::span<const cplx> y);

struct PieriResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double rhs_stderr = 0.0;  // propagated MC error; 0 in deterministic mode
};

// Both sides of the m = 1 product identity: lhs = B_a(-y1;N) * B_a(-y;N),
// rhs = the one-dimensional z-integral with its Gamma prefactor. mc_draws =
// 0 evaluates the two-argument Bessel by the N <= 3 oracle; otherwise it is
// Monte Carlo estimated at fixed quadrature nodes and the node errors are
// propagated into rhs_stderr.
PieriResult pieri_check_m1(const OrderedTuple& a, double y1, double y, Theta theta,
                           const SamplerConfig& cfg, std::size_t mc_draws);

// Centered labels b_i = a_i - |a|/N and the shift r; callers compensate with
// the exp(r * sum y) label-shift identity.
std::pair<OrderedTuple, double> recentre_labels(const OrderedTuple& a);

}  // namespace obp::bessel
