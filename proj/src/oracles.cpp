#include "obp/oracles.hpp"

#include <cmath>

#include "obp/densities.hpp"
#include "obp/quadrature.hpp"

namespace obp::oracles {

namespace {
using quad::cplx;
}

double orbital_unnormalized_mass(const OrderedTuple& a, Theta theta, double rel_tol) {
  const double th = theta.value;
  const std::size_t n = a.size();
  if (n == 1) return 1.0;
  if (n == 2) {
    auto f = [&](double, double dlo, double dhi) -> cplx {
      return std::pow(dlo, th - 1.0) * std::pow(dhi, th - 1.0);
    };
    return quad::integrate_singular(f, a[1], a[0], 1e-300, rel_tol * 0.1, 4000).value.real();
  }
  if (n != 3) throw precondition_error("orbital mass oracle supports N <= 3");
  const double a1 = a[0], a2 = a[1], a3 = a[2];
  const double ga12 = a1 - a2, ga23 = a2 - a3;
  auto inner = [&](double x1, double x2) {
    auto f = [&](double, double dlo, double dhi) -> cplx {
      return std::pow(dlo, th - 1.0) * std::pow(dhi, th - 1.0);
    };
    return quad::integrate_singular(f, x2, x1, 1e-300, rel_tol * 0.01, 400).value.real();
  };
  auto mid = [&](double x1, double d1lo, double d1hi) {
    auto f = [&](double, double d2lo, double d2hi) -> cplx {
      double lv = (2.0 - 2.0 * th) * std::log(d1lo + d2hi);  // x1 - x2
      double cross = (th - 1.0) * (std::log(ga12 + d2hi) + std::log(d2hi) + std::log(d2lo));
      return std::exp(lv + cross) * inner(x1, a3 + d2lo);
    };
    double v = quad::integrate_singular(f, a3, a2, 1e-300, rel_tol * 0.1, 600).value.real();
    return v * std::exp((th - 1.0) * (std::log(d1hi) + std::log(d1lo) + std::log(ga23 + d1lo)));
  };
  auto outer = [&](double, double dlo, double dhi) -> cplx { return mid(a2 + dlo, dlo, dhi); };
  return quad::integrate_singular(outer, a2, a1, 1e-300, rel_tol, 600).value.real();
}

namespace {

// Quadrature nodes can round onto a polytope face; such points carry zero
// density and are skipped instead of tripping the strict validators.
bool strictly_between(double lo, double x, double hi) { return lo < x && x < hi; }

}  // namespace

double gibbs_conditional_mass(const OrderedTuple& given, Theta theta, double rel_tol) {
  if (given.size() != 3) throw precondition_error("gibbs mass oracle needs a level of length 3");
  auto inner = [&](double x1, double x2) {
    auto f = [&](double z, double, double) -> cplx {
      if (!strictly_between(x2, z, x1)) return 0.0;
      InterlacingArray stack({{z}, {x1, x2}});
      return std::exp(log_theta_gibbs_conditional(stack, given, theta));
    };
    return quad::integrate_singular(f, x2, x1, 1e-300, rel_tol * 0.01, 300).value.real();
  };
  auto mid = [&](double x1) {
    auto f = [&](double x2, double, double) -> cplx {
      if (!strictly_between(given[2], x2, given[1]) || !(x2 < x1)) return 0.0;
      return inner(x1, x2);
    };
    return quad::integrate_singular(f, given[2], given[1], 1e-300, rel_tol * 0.1, 400)
        .value.real();
  };
  auto outer = [&](double x1, double, double) -> cplx {
    if (!strictly_between(given[1], x1, given[0])) return 0.0;
    return mid(x1);
  };
  return quad::integrate_singular(outer, given[1], given[0], 1e-300, rel_tol, 400).value.real();
}

double corner_kernel_mass(const OrderedTuple& a, Theta theta, double rel_tol) {
  if (a.size() != 3) throw precondition_error("kernel mass oracle needs a level of length 3");
  auto mid = [&](double x1) {
    auto f = [&](double x2, double, double) -> cplx {
      if (!strictly_between(a[2], x2, a[1]) || !(x2 < x1)) return 0.0;
      OrderedTuple x = OrderedTuple::strict({x1, x2});
      return std::exp(log_corner_kernel(a, x, theta));
    };
    return quad::integrate_singular(f, a[2], a[1], 1e-300, rel_tol * 0.1, 600).value.real();
  };
  auto outer = [&](double x1, double, double) -> cplx {
    if (!strictly_between(a[1], x1, a[0])) return 0.0;
    return mid(x1);
  };
  return quad::integrate_singular(outer, a[1], a[0], 1e-300, rel_tol, 600).value.real();
}

double gbe_mass_m2(Theta theta, double rel_tol) {
  const double bound = 9.0 / std::sqrt(theta.value) + 2.0;
  auto outer = [&](double x1) -> cplx {
    auto f = [&](double x2) -> cplx {
      OrderedTuple x = OrderedTuple::weak({x1, x2});
      return std::exp(log_gbe_density(x, theta));
    };
    return quad::integrate(f, -bound, x1, 1e-14, rel_tol * 0.1, 2000).value;
  };
  return quad::integrate(outer, -bound, bound, 1e-14, rel_tol, 2000).value.real();
}

double gbe_corners_mass_m2(Theta theta, double rel_tol) {
  const double bound = 8.5 / std::sqrt(theta.value) + 2.0;
  auto inner = [&](double x1, double x2) {
    auto f = [&](double z, double, double) -> cplx {
      if (!strictly_between(x2, z, x1)) return 0.0;
      InterlacingArray tri({{z}, {x1, x2}});
      return std::exp(log_gbe_corners_density(tri, theta));
    };
    return quad::integrate_singular(f, x2, x1, 1e-300, rel_tol * 0.01, 200).value.real();
  };
  auto outer = [&](double x1) -> cplx {
    auto f = [&](double x2) -> cplx { return inner(x1, x2); };
    return quad::integrate(f, -bound, x1, 1e-14, rel_tol * 0.1, 500).value;
  };
  return quad::integrate(outer, -bound, bound, 1e-14, rel_tol, 500).value.real();
}

double corner_kernel_x1_cdf(const OrderedTuple& a, Theta theta, double t) {
  if (a.size() != 3) throw precondition_error("kernel cdf oracle needs a level of length 3");
  if (t <= a[1]) return 0.0;  // the upper coordinate lives in (a_2, a_1)
  const double hi = std::min(t, a[0]);
  auto outer = [&](double x1, double, double) -> cplx {
    if (!strictly_between(a[1], x1, a[0])) return 0.0;
    auto f = [&](double x2, double, double) -> cplx {
      if (!strictly_between(a[2], x2, a[1])) return 0.0;
      OrderedTuple x = OrderedTuple::strict({x1, x2});
      return std::exp(log_corner_kernel(a, x, theta));
    };
    return quad::integrate_singular(f, a[2], a[1], 1e-300, 1e-8, 400).value;
  };
  return quad::integrate_singular(outer, a[1], hi, 1e-300, 1e-7, 400).value.real();
}

}  // namespace obp::oracles
