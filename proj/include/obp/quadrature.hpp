#pragma once

#include <complex>
#include <functional>

namespace obp::quad {

using cplx = std::complex<double>;

struct QuadResult {
  cplx value{0.0, 0.0};
  double abs_error = 0.0;
  long evals = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod 7-15 on [a, b]. Stops when the summed error
// estimate is below max(abs_tol, rel_tol * |integral|) or the interval
// budget is exhausted.
QuadResult integrate(const std::function<cplx(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_intervals = 2000);

// Same, for integrands with power-law singularities at one or both endpoints.
// Applies x = a + (b-a) sin^2(u) and hands the integrand the exact offsets
// (x - a) and (b - x), so factors like (x-a)^(theta-1) stay accurate when x
// rounds to an endpoint.
using SingularFn = std::function<cplx(double x, double dlo, double dhi)>;
QuadResult integrate_singular(const SingularFn& f, double a, double b,
                              double abs_tol, double rel_tol, int max_intervals = 2000);

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      double abs_tol, double rel_tol, int max_intervals = 2000);

}  // namespace obp::quad
