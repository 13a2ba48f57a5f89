#include "obp/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "obp/quadrature.hpp"
#include "obp/stats.hpp"

namespace obp::bessel {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

cplx cexp(cplx z) { return std::exp(z); }

cplx oracle_n1(const OrderedTuple& a, std::span<const cplx> y) {
  return cexp(y[0] * a[0]);
}

cplx oracle_n2(const OrderedTuple& a, std::span<const cplx> y, double th) {
  const double a1 = a[0], a2 = a[1];
  const cplx y1 = y[0], y2 = y[1];
  double log_const = std::lgamma(2.0 * th) - 2.0 * std::lgamma(th) + (1.0 - 2.0 * th) * std::log(a1 - a2);
  auto f = [&](double x, double dlo, double dhi) -> cplx {
    return cexp((y1 - y2) * x) * std::pow(dhi, th - 1.0) * std::pow(dlo, th - 1.0);
  };
  auto q = quad::integrate_singular(f, a2, a1, 1e-300, 1e-11, 4000);
  return cexp(y2 * (a1 + a2)) * std::exp(log_const) * q.value;
}

cplx oracle_n3(const OrderedTuple& a, std::span<const cplx> y, double th) {
  const double a1 = a[0], a2 = a[1], a3 = a[2];
  const cplx y1 = y[0], y2 = y[1], y3 = y[2];
  double log_const = std::lgamma(th) + std::lgamma(2.0 * th) + std::lgamma(3.0 * th) -
                     6.0 * std::lgamma(th);
  log_const += (1.0 - 2.0 * th) *
               (std::log(a1 - a2) + std::log(a1 - a3) + std::log(a2 - a3));
  const double asum = a1 + a2 + a3;
  const double ga12 = a1 - a2, ga23 = a2 - a3;

  auto inner = [&](double x1, double x2) -> cplx {
    auto f = [&](double, double dlo, double dhi) -> cplx {
      double z = x2 + dlo;
      return cexp((y1 - y2) * z) * std::pow(dhi, th - 1.0) * std::pow(dlo, th - 1.0);
    };
    return quad::integrate_singular(f, x2, x1, 1e-300, 1e-9, 600).value;
  };

  // All pairwise differences are assembled from the quadrature offsets, so
  // level coordinates that round onto a label cannot produce spurious ties.
  auto mid = [&](double x1, double d1lo, double d1hi) -> cplx {
    auto f = [&](double, double d2lo, double d2hi) -> cplx {
      double x2 = a3 + d2lo;
      cplx w = cexp(y2 * (x1 + x2) + y3 * (asum - x1 - x2));
      double lv = (2.0 - 2.0 * th) * std::log(d1lo + d2hi);  // x1 - x2
      double cross = (th - 1.0) * (std::log(ga12 + d2hi) + std::log(d2hi) + std::log(d2lo));
      return w * std::exp(lv + cross) * inner(x1, x2);
    };
    cplx v = quad::integrate_singular(f, a3, a2, 1e-300, 1e-8, 800).value;
    double cross1 = (th - 1.0) * (std::log(d1hi) + std::log(d1lo) + std::log(ga23 + d1lo));
    return v * std::exp(cross1);
  };

  auto outer = [&](double, double dlo, double dhi) -> cplx {
    return mid(a2 + dlo, dlo, dhi);
  };
  cplx v = quad::integrate_singular(outer, a2, a1, 1e-300, 1e-7, 800).value;
  return std::exp(log_const) * v;
}

}  // namespace

cplx quadrature_small(const OrderedTuple& a, std::span<const cplx> y, Theta theta) {
  const std::size_t n = a.size();
  if (y.size() != n) throw domain_error("oracle needs y of length N (pad with zeros)");
  if (n > 3) throw precondition_error("quadrature oracle supports N <= 3 only");
  double tiny = 1e-10 * std::max(a.scale(), 1.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(a[i] - a[i + 1] > tiny)) throw domain_error("near-coincident labels in oracle");
  }
  switch (n) {
    case 1:
      return oracle_n1(a, y);
    case 2:
      return oracle_n2(a, y, theta.value);
    default:
      return oracle_n3(a, y, theta.value);
  }
}

MCEstimate mc(const OrderedTuple& a, std::span<const cplx> y, Theta theta,
              const SamplerConfig& cfg, std::size_t draws) {
  const std::size_t m = y.size();
  if (m < 1 || m > a.size()) throw domain_error("mc evaluator needs 1 <= m <= N");
  if (m == a.size() && a.size() == 1) {
    return MCEstimate{cexp(y[0] * a[0]), 0.0, 1};
  }
  const std::size_t mm = std::min<std::size_t>(m, a.size() - 1);
  std::vector<cplx> stats(draws);
  run_orbital_draws(a, mm, theta, cfg, draws,
                    [&](std::size_t d, const std::vector<std::vector<double>>& levels) {
                      cplx e = 0.0;
                      double prev = 0.0;
                      for (std::size_t k = 0; k < mm; ++k) {
                        double s = std::accumulate(levels[k].begin(), levels[k].end(), 0.0);
                        // levels are ordered bottom-up: levels[k] is level k+1
                        e += y[k] * (s - prev);
                        prev = s;
                      }
                      if (m == a.size()) {
                        // y_N couples to |a| - |a^{(N-1)}|
                        e += y[m - 1] * (a.sum() - prev);
                      }
                      stats[d] = cexp(e);
                    });
  // Per-chain sub-estimates merged by inverse variance.
  const std::size_t chains = static_cast<std::size_t>(cfg.chains);
  std::vector<MCEstimate> parts;
  for (std::size_t c = 0; c < chains; ++c) {
    std::vector<cplx> sub;
    for (std::size_t d = c; d < draws; d += chains) sub.push_back(stats[d]);
    if (!sub.empty()) parts.push_back(stats::mc_estimate(sub));
  }
  return stats::merge_inverse_variance(parts);
}

namespace {

struct SaddleInfo {
  double m = 0.0;   // abscissa
  double s2 = 0.0;  // theta * sum 1/(m - a_i)^2  ( = -d^2/dt^2 Re S along the line)
  double c0 = 0.0;  // theta * sum log(m - a_i)
};

double solve_saddle(const std::vector<double>& a, double y, double th) {
  // y / theta = sum_i 1 / (z - a_i), unique root right of a_1.
  const double a1 = a.front();
  double target = y / th;
  double scale = std::max(1.0, std::abs(a1));
  double lo = a1 + 1e-12 * scale;
  double hi = a1 + std::max(scale, static_cast<double>(a.size()) * th / y);
  auto R = [&](double z) {
    double s = 0.0;
    for (double ai : a) s += 1.0 / (z - ai);
    return s;
  };
  while (R(hi) > target) hi = a1 + 2.0 * (hi - a1);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (R(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14 * std::max(1.0, std::abs(hi))) break;
  }
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    double r = R(z) - target;
    double dr = 0.0;
    for (double ai : a) dr -= 1.0 / ((z - ai) * (z - ai));
    double step = r / dr;
    double zn = z - step;
    if (!(zn > a1)) break;
    z = zn;
    if (std::abs(step) < 1e-15 * std::abs(z)) break;
  }
  return z;
}

}  // namespace

ContourResult contour_m1(const OrderedTuple& a, double y, Theta theta, ContourSpec spec) {
  const std::size_t n = a.size();
  const double th = theta.value;
  const double nth = static_cast<double>(n) * th;
  if (nth <= 1.0) {
    throw precondition_error("vertical-line contour needs N*theta > 1");
  }
  if (y == 0.0 || !std::isfinite(y)) {
    throw precondition_error("contour evaluator needs real y != 0; use mc for imaginary y");
  }
  if (y < 0.0) {
    // B_a(y) = B_{-a reversed}(-y) (label scaling with c = -1).
    std::vector<double> neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -a[n - 1 - i];
    ContourSpec mirrored = spec;
    if (!std::isnan(spec.abscissa)) mirrored.abscissa = -spec.abscissa;
    return contour_m1(OrderedTuple::strict(std::move(neg)), -y, theta, mirrored);
  }

  const std::vector<double>& av = a.values();
  SaddleInfo sp;
  sp.m = std::isnan(spec.abscissa) ? solve_saddle(av, y, th) : spec.abscissa;
  if (!(sp.m > av.front())) throw precondition_error("contour abscissa must exceed a_1");
  for (double ai : av) {
    double d = sp.m - ai;
    sp.s2 += th / (d * d);
    sp.c0 += th * std::log(d);
  }
  const double width = 1.0 / std::sqrt(sp.s2);

  // Along z = M + i t, with the line value factored out:
  //   g(t) = exp(S(M + i t) - S(M)) = e^{i y t} h(t),
  //   h(t) = exp(c0) prod_i (M - a_i + i t)^{-theta},  S(z) = y z - theta sum log(z - a_i).
  auto h = [&](double t) -> cplx {
    cplx s{sp.c0, 0.0};
    for (double ai : av) s -= th * std::log(cplx(sp.m - ai, t));
    return cexp(s);
  };
  auto g = [&](double t) -> cplx { return cexp(cplx(0.0, y * t)) * h(t); };
  auto h_prime = [&](double t) -> cplx {
    cplx s{0.0, 0.0};
    for (double ai : av) s += 1.0 / cplx(sp.m - ai, t);
    return h(t) * (-th) * cplx(0.0, 1.0) * s;
  };

  ContourResult out;
  out.abscissa = sp.m;

  // The truncated tails are corrected by two integration-by-parts terms at
  // t = T (computable in closed form); the remainder of the upper tail is
  // bounded by y^{-2} int_T^inf |h''| <= N theta e^{c0} T^{-N theta - 1} / y^2.
  auto log_tail_remainder = [&](double T) {
    return std::log(2.0) + std::log(nth) + sp.c0 - (nth + 1.0) * std::log(T) -
           2.0 * std::log(y);
  };

  double T;
  if (!std::isnan(spec.truncation)) {
    T = spec.truncation;
    if (!(T > 0.0)) throw precondition_error("truncation must be positive");
  } else {
    // Analytic solve of log_tail_remainder(T) = log(I_guess * 1e-10) with the
    // Gaussian bulk guess I ~ sqrt(2 pi) * width; verified after integrating.
    double ln_target = std::log(std::sqrt(2.0 * kPi) * width) + std::log(1e-10);
    double lnT = (std::log(2.0) + std::log(nth) + sp.c0 - 2.0 * std::log(y) - ln_target) /
                 (nth + 1.0);
    T = std::max(16.0 * width, std::exp(std::min(lnT, 40.0)));
    if (!std::isfinite(T)) T = 16.0 * width;
  }

  double integral = 0.0;
  double quad_err = 0.0;
  const double chunk = std::max(8.0 * kPi / y, 4.0 * width);
  for (int grow = 0; grow < 8; ++grow) {
    integral = 0.0;
    quad_err = 0.0;
    double split = std::min(T, 16.0 * width);
    if (spec.rule == ContourSpec::Rule::fixed_gauss) {
      int panels = std::max(1, (spec.nodes > 0 ? spec.nodes : 512) / 15);
      for (int p = 0; p < panels; ++p) {
        auto q = quad::integrate([&](double t) { return g(t); }, split * p / panels,
                                 split * (p + 1) / panels, 1e-300, 1e-15, 1);
        integral += 2.0 * q.value.real();
        quad_err += 2.0 * q.abs_error;
        out.evals += q.evals;
      }
    } else {
      auto q1 = quad::integrate([&](double t) { return g(t); }, 0.0, split, 1e-300, 1e-11, 4000);
      integral = 2.0 * q1.value.real();
      quad_err = 2.0 * q1.abs_error;
      out.evals += q1.evals;
    }
    // Oscillatory mid-range in bounded-phase chunks so the panel error
    // estimates stay meaningful.
    double t0 = split;
    while (t0 < T) {
      double t1 = std::min(T, t0 + chunk);
      int budget = (spec.rule == ContourSpec::Rule::fixed_gauss) ? 1 : 60;
      auto q = quad::integrate([&](double t) { return g(t); }, t0, t1, 1e-300, 1e-10, budget);
      integral += 2.0 * q.value.real();
      quad_err += 2.0 * q.abs_error;
      out.evals += q.evals;
      t0 = t1;
    }
    // Closed-form tail corrections from integrating e^{iyt} by parts twice.
    cplx iy{0.0, y};
    cplx corr = cexp(cplx(0.0, y * T)) * (-h(T) / iy + h_prime(T) / (iy * iy));
    integral += 2.0 * corr.real();
    if (!std::isnan(spec.truncation)) break;  // user pinned T
    if (!(integral > 0.0)) throw numeric_error("contour integral collapsed; bad abscissa?");
    if (log_tail_remainder(T) <= std::log(integral) + std::log(1e-10)) break;
    T *= 2.0;
  }
  if (!(integral > 0.0)) throw numeric_error("contour integral not positive");

  out.truncation = T;
  out.tail_bound = std::exp(std::min(log_tail_remainder(T) - std::log(integral), 700.0));
  out.rel_error = quad_err / integral + out.tail_bound;

  // log B = lgamma(N theta) - (N theta - 1) log y - log(2 pi) + S(M) + log I,
  // and S(M) = y M - c0.
  out.log_abs = std::lgamma(nth) - (nth - 1.0) * std::log(y) - std::log(2.0 * kPi) +
                (y * sp.m - sp.c0) + std::log(integral);
  out.value = cplx(std::exp(std::min(out.log_abs, 709.0)), 0.0);
  return out;
}

cplx theta0(std::span<const cplx> a, std::span<const cplx> y) {
  const std::size_t n = a.size();
  if (y.size() != n) throw domain_error("theta0 needs |a| = |y|");
  if (n > 8) throw precondition_error("theta0 permutation sum supports N <= 8");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  cplx sum{0.0, 0.0};
  std::size_t count = 0;
  do {
    cplx e{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) e += a[i] * y[idx[i]];
    sum += cexp(e);
    ++count;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return sum / static_cast<double>(count);
}

namespace {

// One-argument Bessel at real argument by the cheapest exact route.
double bessel_one_arg(const OrderedTuple& a, double y, Theta theta) {
  if (a.size() <= 3) {
    std::vector<cplx> yy(a.size(), cplx(0.0, 0.0));
    yy[0] = y;
    return quadrature_small(a, yy, theta).real();
  }
  return contour_m1(a, y, theta).value.real();
}

}  // namespace

PieriResult pieri_check_m1(const OrderedTuple& a, double y1, double y, Theta theta,
                           const SamplerConfig& cfg, std::size_t mc_draws) {
  if (!(y1 > y && y > 0.0)) throw domain_error("pieri m=1 needs y1 > y > 0");
  const std::size_t n = a.size();
  const double th = theta.value;
  if (n < 2) throw domain_error("pieri m=1 needs N >= 2");

  PieriResult out;
  out.lhs = bessel_one_arg(a, -y1, theta) * bessel_one_arg(a, -y, theta);

  const double log_pref = std::lgamma(static_cast<double>(n) * th) -
                          std::lgamma(static_cast<double>(n - 1) * th) - std::lgamma(th) -
                          th * std::log(y) - th * std::log(y1);
  const double pw = th * static_cast<double>(n - 1) - 1.0;

  auto weight = [&](double z, double dlo, double dhi) {
    // dlo = z, dhi = y - z handed in exactly by the substitution.
    double g = (y1 - y + 2.0 * z) * std::pow(y1 - y + z, th - 1.0);
    double f = std::pow((dhi / y) * (1.0 + z / y1), pw);
    return g * f * std::pow(dlo, th - 1.0);
  };

  auto two_arg_oracle = [&](double z) {
    std::vector<cplx> yy(n, cplx(0.0, 0.0));
    yy[0] = -(y1 + z);
    yy[1] = -(y - z);
    return quadrature_small(a, yy, theta).real();
  };

  if (mc_draws == 0) {
    if (n > 3) throw precondition_error("deterministic pieri rhs needs N <= 3");
    // The N=3 inner oracle costs ~10 ms per node, so its z-integral runs at
    // a matching coarser tolerance.
    const double ztol = (n == 2) ? 1e-8 : 3e-6;
    const int zmax = (n == 2) ? 1500 : 48;
    auto f = [&](double z, double dlo, double dhi) -> cplx {
      return weight(z, dlo, dhi) * two_arg_oracle(z);
    };
    auto q = quad::integrate_singular(f, 0.0, y, 1e-300, ztol, zmax);
    out.rhs = std::exp(log_pref) * q.value.real();
    out.rhs_stderr = 0.0;
    return out;
  }

  // Monte Carlo inner Bessel at fixed transformed quadrature nodes; node
  // estimates are independent, so their variances add through the rule
  // weights.
  const int panels = 4;
  const double half_pi = 1.5707963267948966;
  double rhs = 0.0;
  double var = 0.0;
  SamplerConfig node_cfg = cfg;
  for (int p = 0; p < panels; ++p) {
    double u0 = half_pi * p / panels;
    double u1 = half_pi * (p + 1) / panels;
    // 15-node Kronrod panel in the sin^2-substituted variable.
    const double kx[8] = {0.000000000000000000, 0.207784955007898468, 0.405845151377397167,
                          0.586087235467691130, 0.741531185599394440, 0.864864423359769073,
                          0.949107912342758525, 0.991455371120812639};
    const double kw[8] = {0.209482141084727828, 0.204432940075298892, 0.190350578064785410,
                          0.169004726639267903, 0.140653259715525919, 0.104790010322250184,
                          0.063092092629978553, 0.022935322010529225};
    double c = 0.5 * (u0 + u1), h = 0.5 * (u1 - u0);
    for (int j = -7; j <= 7; ++j) {
      double u = c + h * ((j < 0) ? -kx[-j] : kx[j]);
      double wq = h * kw[std::abs(j)];
      double snu = std::sin(u), csu = std::cos(u);
      double dlo = y * snu * snu, dhi = y * csu * csu;
      double z = dlo;
      double jac = y * 2.0 * snu * csu;
      std::vector<cplx> yy = {cplx(-(y1 + z), 0.0), cplx(-(y - z), 0.0)};
      node_cfg.seed = cfg.seed ^ (0x9e3779b97f4a7c15ull * (p * 31 + j + 16));
      MCEstimate est = mc(a, yy, theta, node_cfg, mc_draws);
      double wgt = wq * jac * weight(z, dlo, dhi);
      rhs += wgt * est.mean.real();
      var += wgt * wgt * est.stderror * est.stderror;
    }
  }
  out.rhs = std::exp(log_pref) * rhs;
  out.rhs_stderr = std::exp(log_pref) * std::sqrt(var);
  return out;
}

std::pair<OrderedTuple, double> recentre_labels(const OrderedTuple& a) {
  const std::size_t n = a.size();
  std::vector<double> b = a.values();
  double r = a.sum() / static_cast<double>(n);
  for (double& v : b) v -= r;
  double r2 = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
  if (r2 != 0.0) {
    for (double& v : b) v -= r2;
  }
  return {OrderedTuple::strict(std::move(b)), r + r2};
}

}  // namespace obp::bessel
