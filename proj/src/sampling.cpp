#include "obp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace obp {

namespace {

// Transported Beta(theta,theta) draw in the open gap (lo, hi).
double beta_in_gap(double lo, double hi, double theta, Rng& rng) {
  double x = lo + (hi - lo) * rng.beta_symmetric(theta);
  if (x <= lo) x = std::nextafter(lo, hi);
  if (x >= hi) x = std::nextafter(hi, lo);
  return x;
}

// Running product of (p[i] - cand) / (p[i] - cur) over a factor array, kept
// in independent numerator/denominator lanes so the multiply chains pipeline
// and vectorize. Lane pairs are rescaled together when magnitudes drift, so
// the quotient survives long chains without overflow.
struct RatioAccumulator {
  static constexpr std::size_t kLanes = 4;
  double num[kLanes] = {1.0, 1.0, 1.0, 1.0};
  double den[kLanes] = {1.0, 1.0, 1.0, 1.0};

  void rescale() {
    for (std::size_t k = 0; k < kLanes; ++k) {
      double mag = std::abs(num[k]);
      if (mag > 1e120 || (mag > 0.0 && mag < 1e-120)) {
        double s = 1.0 / mag;
        num[k] *= s;
        den[k] *= s;
      }
    }
  }

  void add(const double* p, std::size_t count, double cand, double cur) {
    std::size_t i = 0;
    std::size_t chunk = 0;
    for (; i + kLanes <= count; i += kLanes) {
      for (std::size_t k = 0; k < kLanes; ++k) {
        num[k] *= p[i + k] - cand;
        den[k] *= p[i + k] - cur;
      }
      if (++chunk == 24) {
        rescale();
        chunk = 0;
      }
    }
    for (; i < count; ++i) {
      num[0] *= p[i] - cand;
      den[0] *= p[i] - cur;
    }
    rescale();
  }

  double quotient() const {
    double q = 1.0;
    for (std::size_t k = 0; k < kLanes; ++k) q *= num[k] / den[k];
    return q;
  }
};

// Full conditional of coordinate r in the gap (a[r+1], a[r]):
//   f(t) ~ prod_{i != r} |t - x_i| * prod_s |a_s - t|^{theta-1}.
double log_conditional(const std::vector<double>& a, const std::vector<double>& x,
                       std::size_t r, double t, double theta) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == r) continue;
    s += std::log(std::abs(t - x[i]));
  }
  if (theta != 1.0) {
    double c = 0.0;
    for (double as : a) c += std::log(std::abs(as - t));
    s += (theta - 1.0) * c;
  }
  return s;
}

// Independence-MH update with Beta(theta,theta) proposal. The proposal
// absorbs |a_r - t|^{theta-1} |t - a_{r+1}|^{theta-1}, so the acceptance
// ratio only involves the smooth leftover factors.
void update_beta_mh(const std::vector<double>& a, std::vector<double>& x, std::size_t r,
                    double theta, Rng& rng) {
  const std::size_t n = x.size();
  const double lo = a[r + 1], hi = a[r];
  const double cand = beta_in_gap(lo, hi, theta, rng);
  const double cur = x[r];
  RatioAccumulator rx;
  rx.add(x.data(), r, cand, cur);
  rx.add(x.data() + r + 1, n - r - 1, cand, cur);
  double ratio = std::abs(rx.quotient());
  if (theta != 1.0) {
    RatioAccumulator ra;
    ra.add(a.data(), r, cand, cur);
    ra.add(a.data() + r + 2, n + 1 - r - 2, cand, cur);
    double w = std::abs(ra.quotient());
    if (theta == 2.0) {
      ratio *= w;
    } else if (theta == 0.5) {
      ratio /= std::sqrt(w);
    } else {
      ratio *= std::pow(w, theta - 1.0);
    }
  }
  if (!(ratio >= 0.0)) return;  // NaN guard: keep current state
  if (ratio >= 1.0 || rng.uniform() < ratio) x[r] = cand;
}

// Tabulated inverse-CDF draw of the exact conditional on a sin^2-stretched
// grid; the substitution absorbs the (theta-1)-power endpoint singularities.
void update_inverse_cdf(const std::vector<double>& a, std::vector<double>& x, std::size_t r,
                        double theta, int nodes, Rng& rng) {
  const double lo = a[r + 1], hi = a[r];
  const double width = hi - lo;
  const double half_pi = 1.5707963267948966;
  static thread_local std::vector<double> logh, pos, cdf;
  logh.assign(nodes, 0.0);
  pos.assign(nodes, 0.0);
  cdf.assign(nodes + 1, 0.0);
  double mx = -1e308;
  for (int j = 0; j < nodes; ++j) {
    double u = half_pi * (j + 0.5) / nodes;
    double snu = std::sin(u), csu = std::cos(u);
    double dlo = width * snu * snu;
    double t = lo + dlo;
    pos[j] = t;
    // log of conditional * Jacobian; the two adjacent singular factors are
    // expressed through the exact offsets.
    double lf = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i == r) continue;
      lf += std::log(std::abs(t - x[i]));
    }
    if (theta != 1.0) {
      double c = 0.0;
      for (std::size_t s = 0; s < a.size(); ++s) {
        if (s == r || s == r + 1) continue;
        c += std::log(std::abs(a[s] - t));
      }
      lf += (theta - 1.0) * (c + std::log(dlo) + std::log(width * csu * csu));
    }
    lf += std::log(width * 2.0 * snu * csu);
    logh[j] = lf;
    mx = std::max(mx, lf);
  }
  for (int j = 0; j < nodes; ++j) {
    cdf[j + 1] = cdf[j] + std::exp(logh[j] - mx);
  }
  double v = rng.uniform() * cdf[nodes];
  int j = static_cast<int>(std::lower_bound(cdf.begin() + 1, cdf.end(), v) - (cdf.begin() + 1));
  j = std::min(j, nodes - 1);
  double frac = (v - cdf[j]) / std::max(cdf[j + 1] - cdf[j], 1e-300);
  double u = half_pi * (j + frac) / nodes;
  double snu = std::sin(u);
  double t = lo + width * snu * snu;
  if (t <= lo) t = std::nextafter(lo, hi);
  if (t >= hi) t = std::nextafter(hi, lo);
  x[r] = t;
}

// Slice sampler (stepping out + shrinkage) on the exact conditional.
void update_slice(const std::vector<double>& a, std::vector<double>& x, std::size_t r,
                  double theta, Rng& rng) {
  const double lo = a[r + 1], hi = a[r];
  double cur = x[r];
  double ly = log_conditional(a, x, r, cur, theta) + std::log(rng.uniform());
  double w = 0.25 * (hi - lo);
  double L = std::max(lo, cur - w * rng.uniform());
  double R = std::min(hi, L + w);
  for (int it = 0; it < 64 && L > lo; ++it) {
    if (log_conditional(a, x, r, L, theta) < ly) break;
    L = std::max(lo, L - w);
  }
  for (int it = 0; it < 64 && R < hi; ++it) {
    if (log_conditional(a, x, r, R, theta) < ly) break;
    R = std::min(hi, R + w);
  }
  for (int it = 0; it < 128; ++it) {
    double cand = L + (R - L) * rng.uniform();
    if (cand <= lo || cand >= hi) continue;
    if (log_conditional(a, x, r, cand, theta) >= ly) {
      x[r] = cand;
      return;
    }
    if (cand < cur) {
      L = cand;
    } else {
      R = cand;
    }
  }
}

// Weighted-resolvent sum S(z) = sum_{s != r, r+1} w_s / (z - a_s) and its
// derivative -sum w_s / (z - a_s)^2, accumulated in independent lanes
// (skips the two poles bounding gap r).
void far_field_sum(const std::vector<double>& a, const std::vector<double>& w, std::size_t r,
                   double z, double& value, double& deriv) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  double dac[4] = {0.0, 0.0, 0.0, 0.0};
  auto run = [&](const double* as, const double* ws, std::size_t count) {
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
      for (int k = 0; k < 4; ++k) {
        double q = ws[i + k] / (z - as[i + k]);
        acc[k] += q;
        dac[k] += q / (z - as[i + k]);
      }
    }
    for (; i < count; ++i) {
      double q = ws[i] / (z - as[i]);
      acc[0] += q;
      dac[0] += q / (z - as[i]);
    }
  };
  run(a.data(), w.data(), r);
  run(a.data() + r + 2, w.data() + r + 2, a.size() - r - 2);
  value = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  deriv = -((dac[0] + dac[1]) + (dac[2] + dac[3]));
}

// Exact Dixon-Anderson draw: the roots of sum_s w_s / (z - a_s) with
// w_s ~ Gamma(theta) iid (an unnormalized Dirichlet; roots are scale
// invariant). One root lies in each gap. Solved per gap by Newton in logit
// space (multiplicative steps handle edge-hugging roots at theta < 1): first
// against a cheap surrogate with the two adjacent outer poles exact and the
// remaining far field linearized at the gap midpoint, then polished with the
// exact resolvent sum.
void corner_step_roots(const std::vector<double>& a, std::vector<double>& x, double theta,
                       Rng& rng) {
  const std::size_t n = a.size() - 1;
  x.resize(n);
  static thread_local std::vector<double> w;
  w.resize(n + 1);
  for (auto& v : w) v = std::max(rng.gamma(theta), 1e-290);

  auto logit = [](double t) { return std::log(t / (1.0 - t)); };

  for (std::size_t r = 0; r < n; ++r) {
    const double hi = a[r], lo = a[r + 1];
    const double g = hi - lo;
    const double w_hi = w[r], w_lo = w[r + 1];
    const double zm = lo + 0.5 * g;
    const bool has_left = r >= 1;        // outer pole a_{r-1} above the gap
    const bool has_right = r + 2 <= n;   // outer pole a_{r+2} below the gap
    const double al = has_left ? a[r - 1] : 0.0, wl = has_left ? w[r - 1] : 0.0;
    const double ar = has_right ? a[r + 2] : 0.0, wr = has_right ? w[r + 2] : 0.0;

    double sv_m, sd_m;
    far_field_sum(a, w, r, zm, sv_m, sd_m);
    // Linear model of the far field beyond the adjacent outer poles.
    double c0 = sv_m, c1 = sd_m;
    if (has_left) {
      double q = wl / (zm - al);
      c0 -= q;
      c1 += q / (zm - al);
    }
    if (has_right) {
      double q = wr / (zm - ar);
      c0 -= q;
      c1 += q / (zm - ar);
    }

    enum class Mode { surrogate, exact };
    auto eval = [&](double t, double omt, Mode mode, double& f, double& df_dt) {
      double z = lo + t * g;
      double sv, sd;
      if (mode == Mode::exact) {
        far_field_sum(a, w, r, z, sv, sd);
      } else {
        sv = c0 + c1 * (z - zm);
        sd = c1;
        if (has_left) {
          double q = wl / (z - al);
          sv += q;
          sd -= q / (z - al);
        }
        if (has_right) {
          double q = wr / (z - ar);
          sv += q;
          sd -= q / (z - ar);
        }
      }
      f = w_lo / t - w_hi / omt + g * sv;
      df_dt = -w_lo / (t * t) - w_hi / (omt * omt) + g * g * sd;
    };

    // F decreases from +inf at t = 0+ to -inf at t = 1-.
    auto solve = [&](double phi0, Mode mode, int iters) {
      double phi = phi0, phi_lo = -72.0, phi_hi = 72.0;
      for (int it = 0; it < iters; ++it) {
        double t = 1.0 / (1.0 + std::exp(-phi));
        double omt = 1.0 / (1.0 + std::exp(phi));
        double f, df;
        eval(t, omt, mode, f, df);
        if (f > 0.0) {
          phi_lo = phi;
        } else {
          phi_hi = phi;
        }
        double pn = phi - f / (df * t * omt);
        if (!(pn > phi_lo && pn < phi_hi)) pn = 0.5 * (phi_lo + phi_hi);
        if (std::abs(pn - phi) < 1e-12) return pn;
        phi = pn;
      }
      return phi;
    };

    double t0 = std::clamp(w_lo / (w_lo + w_hi), 1e-12, 1.0 - 1e-12);
    double phi = solve(logit(t0), Mode::surrogate, 48);
    phi = solve(phi, Mode::exact, 6);
    double t = std::clamp(1.0 / (1.0 + std::exp(-phi)), 1e-15, 1.0 - 1e-15);
    double root = lo + t * g;
    if (root <= lo) root = std::nextafter(lo, hi);
    if (root >= hi) root = std::nextafter(hi, lo);
    x[r] = root;
  }
}

}  // namespace

namespace detail {

void corner_sweep(const std::vector<double>& a, std::vector<double>& x, double theta,
                  const SamplerConfig& cfg, Rng& rng) {
  if (cfg.proposal == Proposal::dirichlet_roots) {
    corner_step_roots(a, x, theta, rng);  // exact full redraw
    return;
  }
  for (std::size_t r = 0; r < x.size(); ++r) {
    switch (cfg.proposal) {
      case Proposal::beta_mh:
        update_beta_mh(a, x, r, theta, rng);
        break;
      case Proposal::gibbs_inverse_cdf:
        update_inverse_cdf(a, x, r, theta, cfg.quadrature_nodes, rng);
        break;
      case Proposal::slice:
        update_slice(a, x, r, theta, rng);
        break;
      case Proposal::dirichlet_roots:
        break;  // handled above
    }
  }
}

void corner_step_inplace(const std::vector<double>& a, std::vector<double>& x, double theta,
                         const SamplerConfig& cfg, Rng& rng) {
  const std::size_t n = a.size() - 1;
  x.resize(n);
  if (n == 1) {
    x[0] = beta_in_gap(a[1], a[0], theta, rng);  // exact Dixon-Anderson at n=1
    return;
  }
  if (cfg.proposal == Proposal::dirichlet_roots) {
    corner_step_roots(a, x, theta, rng);
    return;
  }
  for (std::size_t r = 0; r < n; ++r) x[r] = beta_in_gap(a[r + 1], a[r], theta, rng);
  for (int sweep = 0; sweep < cfg.burn_in; ++sweep) corner_sweep(a, x, theta, cfg, rng);
}

}  // namespace detail

OrderedTuple sample_corner_step(const OrderedTuple& a, Theta theta, const SamplerConfig& cfg,
                                Rng& rng) {
  cfg.validate();
  if (a.size() < 2) throw domain_error("corner step needs a level of length >= 2");
  if (a.ordering() != Ordering::strict) throw domain_error("corner step needs a strict tuple");
  std::vector<double> x;
  detail::corner_step_inplace(a.values(), x, theta.value, cfg, rng);
  return OrderedTuple::strict(std::move(x));
}

InterlacingArray sample_orbital_levels(const OrderedTuple& a, std::size_t m, Theta theta,
                                       const SamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t N = a.size();
  if (m < 1 || m > N - 1) throw domain_error("need 1 <= m <= N-1");
  std::vector<std::vector<double>> kept(m);
  std::vector<double> top_ctx;
  std::vector<double> cur = a.values();
  std::vector<double> nxt;
  for (std::size_t n = N - 1; n >= 1; --n) {
    detail::corner_step_inplace(cur, nxt, theta.value, cfg, rng);
    if (n == m) top_ctx = cur;
    if (n <= m) kept[n - 1] = nxt;
    cur.swap(nxt);
    if (n == 1) break;
  }
  return InterlacingArray(std::move(kept), std::move(top_ctx));
}

InterlacingArray sample_orbital_levels_uniform_theta1(const OrderedTuple& a, std::size_t m,
                                                      Rng& rng) {
  const std::size_t N = a.size();
  if (m < 1 || m > N - 1) throw domain_error("need 1 <= m <= N-1");
  const std::vector<double>& top = a.values();
  std::vector<std::vector<double>> tri(N - 1);
  // Proposal: each level uniform in the gap boxes of the level above. The
  // target/proposal ratio is the product of the sampled interior gap lengths
  // over levels 2..N-1; each gap x^{(k)}_r - x^{(k)}_{r+1} is bounded by the
  // interlacing envelope a_r - a_{r + N - k + 1}.
  double log_bound = 0.0;
  for (std::size_t k = 2; k + 1 <= N; ++k) {
    for (std::size_t r = 0; r + 2 <= k; ++r) {
      log_bound += std::log(top[r] - top[r + N - k + 1]);
    }
  }
  for (int attempt = 0; attempt < 2000000; ++attempt) {
    const std::vector<double>* above = &top;
    double log_gaps = 0.0;
    bool ok = true;
    for (std::size_t n = N - 1; n >= 1; --n) {
      std::vector<double> lev(n);
      for (std::size_t r = 0; r < n; ++r) {
        lev[r] = rng.uniform((*above)[r + 1], (*above)[r]);
        if (!(lev[r] > (*above)[r + 1] && lev[r] < (*above)[r])) ok = false;
      }
      if (!ok) break;
      tri[n - 1] = std::move(lev);
      if (n > 1) {
        for (std::size_t j = 0; j + 1 < n; ++j) {
          log_gaps += std::log(tri[n - 1][j] - tri[n - 1][j + 1]);
        }
      }
      above = &tri[n - 1];
    }
    if (!ok) continue;
    if (std::log(rng.uniform()) < log_gaps - log_bound) {
      std::vector<std::vector<double>> kept(tri.begin(), tri.begin() + m);
      std::vector<double> top_ctx = (m == N - 1) ? top : tri[m];
      return InterlacingArray(std::move(kept), std::move(top_ctx));
    }
  }
  throw numeric_error("uniform triangle rejection sampler failed to accept; N too large");
}

OrderedTuple sample_gbe_tridiagonal(std::size_t m, Theta theta, Rng& rng) {
  const double beta = 2.0 * theta.value;
  Eigen::VectorXd diag(m), sub(m > 1 ? m - 1 : 1);
  const double inv_sqrt2 = 0.70710678118654752440;
  for (std::size_t i = 0; i < m; ++i) diag[i] = rng.gaussian();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    sub[i] = rng.chi(beta * static_cast<double>(m - 1 - i)) * inv_sqrt2;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(m > 1 ? m - 1 : 0), Eigen::EigenvaluesOnly);
  std::vector<double> x(m);
  const double scale = 1.0 / std::sqrt(theta.value);
  for (std::size_t i = 0; i < m; ++i) x[i] = solver.eigenvalues()[m - 1 - i] * scale;
  return OrderedTuple::weak(std::move(x));
}

namespace {

// One slice-sampling sweep of the GbE log density
//   2 theta sum_{i<j} log|x_i - x_j| - theta/2 sum x_i^2
// over the ordered chamber; boundary coordinates step into unbounded tails.
void gbe_sweep(std::vector<double>& x, double theta, Rng& rng) {
  const std::size_t m = x.size();
  auto logf = [&](std::size_t i, double t) {
    double s = -0.5 * theta * t * t;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      s += 2.0 * theta * std::log(std::abs(t - x[j]));
    }
    return s;
  };
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    double lo = (i + 1 < m) ? x[i + 1] : -inf;
    double hi = (i > 0) ? x[i - 1] : inf;
    double cur = x[i];
    double ly = logf(i, cur) + std::log(rng.uniform());
    double w = 1.0 / std::sqrt(theta);
    double L = cur - w * rng.uniform();
    double R = L + w;
    for (int it = 0; it < 64 && L > lo && logf(i, L) >= ly; ++it) L -= w;
    for (int it = 0; it < 64 && R < hi && logf(i, R) >= ly; ++it) R += w;
    L = std::max(L, lo);
    R = std::min(R, hi);
    for (int it = 0; it < 128; ++it) {
      double cand = L + (R - L) * rng.uniform();
      if (cand > lo && cand < hi && logf(i, cand) >= ly) {
        x[i] = cand;
        break;
      }
      if (cand < cur) {
        L = cand;
      } else {
        R = cand;
      }
    }
  }
}

}  // namespace

GbeChain::GbeChain(std::size_t m, Theta theta, const SamplerConfig& cfg, Rng rng)
    : theta_(theta.value), thinning_(cfg.thinning), x_(m), rng_(rng) {
  cfg.validate();
  for (auto& v : x_) v = rng_.gaussian() / std::sqrt(theta_);
  std::sort(x_.begin(), x_.end(), std::greater<double>());
  for (int s = 0; s < cfg.burn_in; ++s) gbe_sweep(x_, theta_, rng_);
}

void GbeChain::sweep() { gbe_sweep(x_, theta_, rng_); }

const std::vector<double>& GbeChain::next() {
  for (int s = 0; s < thinning_; ++s) gbe_sweep(x_, theta_, rng_);
  return x_;
}

OrderedTuple sample_gbe(std::size_t m, Theta theta, const SamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  if (m == 0) throw domain_error("GbE rank must be >= 1");
  if (m == 1) {
    return OrderedTuple::weak({rng.gaussian() / std::sqrt(theta.value)});
  }
  GbeChain chain(m, theta, cfg, Rng(rng.next_u64()));
  return OrderedTuple::weak(chain.next());
}

InterlacingArray sample_gbe_corners(std::size_t m, Theta theta, const SamplerConfig& cfg,
                                    Rng& rng) {
  cfg.validate();
  OrderedTuple top = sample_gbe(m, theta, cfg, rng);
  if (m == 1) {
    return InterlacingArray(std::vector<std::vector<double>>{{top[0]}});
  }
  std::vector<std::vector<double>> levels(m);
  levels[m - 1] = top.values();
  std::vector<double> cur = top.values(), nxt;
  for (std::size_t n = m - 1; n >= 1; --n) {
    detail::corner_step_inplace(cur, nxt, theta.value, cfg, rng);
    levels[n - 1] = nxt;
    cur.swap(nxt);
  }
  return InterlacingArray(std::move(levels));
}

namespace {

void run_parallel_draws(
    int chains, std::size_t draws,
    const std::function<void(std::size_t draw, Rng& rng,
                             std::vector<std::vector<double>>& out)>& one_draw,
    const std::function<void(std::size_t, const std::vector<std::vector<double>>&)>& collect,
    const Rng& root) {
  std::vector<std::vector<std::vector<double>>> results(draws);
  auto worker = [&](int chain) {
    Rng rng = root.split(static_cast<std::uint64_t>(chain) + 1);
    std::vector<std::vector<double>> out;
    for (std::size_t d = static_cast<std::size_t>(chain); d < draws;
         d += static_cast<std::size_t>(chains)) {
      one_draw(d, rng, out);
      results[d] = out;
    }
  };
  if (chains == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(chains);
    for (int c = 0; c < chains; ++c) pool.emplace_back(worker, c);
    for (auto& t : pool) t.join();
  }
  for (std::size_t d = 0; d < draws; ++d) collect(d, results[d]);
}

}  // namespace

void run_orbital_draws(
    const OrderedTuple& a, std::size_t m, Theta theta, const SamplerConfig& cfg,
    std::size_t draws,
    const std::function<void(std::size_t, const std::vector<std::vector<double>>&)>& collect) {
  cfg.validate();
  const std::size_t N = a.size();
  if (m < 1 || m > N - 1) throw domain_error("need 1 <= m <= N-1");
  Rng root(cfg.seed);
  auto one_draw = [&](std::size_t, Rng& rng, std::vector<std::vector<double>>& out) {
    out.assign(m, {});
    std::vector<double> cur = a.values(), nxt;
    for (std::size_t n = N - 1; n >= 1; --n) {
      detail::corner_step_inplace(cur, nxt, theta.value, cfg, rng);
      if (n <= m) out[n - 1] = nxt;
      cur.swap(nxt);
      if (n == 1) break;
    }
  };
  run_parallel_draws(cfg.chains, draws, one_draw, collect, root);
}

void run_gbe_corners_draws(
    std::size_t m, Theta theta, const SamplerConfig& cfg, std::size_t draws,
    const std::function<void(std::size_t, const std::vector<std::vector<double>>&)>& collect) {
  cfg.validate();
  Rng root(cfg.seed);
  // Each chain keeps one persistent GbE top-level chain; corner steps below
  // are redrawn per draw.
  const int chains = cfg.chains;
  std::vector<std::vector<std::vector<double>>> results(draws);
  auto worker = [&](int chain) {
    Rng rng = root.split(static_cast<std::uint64_t>(chain) + 1);
    GbeChain top_chain(m, theta, cfg, Rng(rng.next_u64()));
    std::vector<double> cur, nxt;
    for (std::size_t d = static_cast<std::size_t>(chain); d < draws;
         d += static_cast<std::size_t>(chains)) {
      std::vector<std::vector<double>> out(m);
      if (m == 1) {
        out[0] = {rng.gaussian() / std::sqrt(theta.value)};
      } else {
        out[m - 1] = top_chain.next();
        cur = out[m - 1];
        for (std::size_t n = m - 1; n >= 1; --n) {
          detail::corner_step_inplace(cur, nxt, theta.value, cfg, rng);
          out[n - 1] = nxt;
          cur.swap(nxt);
        }
      }
      results[d] = std::move(out);
    }
  };
  if (chains == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(chains);
    for (int c = 0; c < chains; ++c) pool.emplace_back(worker, c);
    for (auto& t : pool) t.join();
  }
  for (std::size_t d = 0; d < draws; ++d) collect(d, results[d]);
}

}  // namespace obp
