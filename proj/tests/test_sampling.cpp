#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>

#include "obp/bessel.hpp"
#include "obp/densities.hpp"
#include "obp/oracles.hpp"
#include "obp/quadrature.hpp"
#include "obp/sampling.hpp"
#include "obp/stats.hpp"

using namespace obp;

namespace {

SamplerConfig fast_cfg(std::uint64_t seed, Proposal p = Proposal::beta_mh, int burn = 24) {
  SamplerConfig cfg;
  cfg.seed = seed;
  cfg.chains = 2;
  cfg.burn_in = burn;
  cfg.proposal = p;
  return cfg;
}

std::vector<double> corner_draws(const OrderedTuple& a, Theta th, const SamplerConfig& cfg,
                                 int n_draws, std::size_t coord) {
  Rng rng(cfg.seed);
  std::vector<double> out(n_draws);
  for (int d = 0; d < n_draws; ++d) {
    out[d] = sample_corner_step(a, th, cfg, rng)[coord];
  }
  return out;
}

}  // namespace

TEST_CASE("corner step n=1 theta=1 is uniform") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.0});
  auto xs = corner_draws(a, Theta(1.0), fast_cfg(11), 10000, 0);
  auto ks = stats::ks_one_sample(xs, [](double t) { return std::clamp(t, 0.0, 1.0); });
  CHECK(ks.p > 0.01);
}

TEST_CASE("corner step n=1 theta=3 matches Beta(3,3)") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.0});
  auto xs = corner_draws(a, Theta(3.0), fast_cfg(12), 10000, 0);
  auto ks = stats::ks_one_sample(xs, [](double t) { return stats::beta_cdf(t, 3.0, 3.0); });
  CHECK(ks.p > 0.01);
  double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  CHECK(std::abs(mean - 0.5) < 3.0 * std::sqrt(1.0 / (4.0 * 7.0) / xs.size()));
}

TEST_CASE("corner step n=2: MCMC marginal matches the quadrature CDF") {
  OrderedTuple a = OrderedTuple::strict({2.0, 1.0, 0.0});
  // CDF of the upper coordinate from 2-d quadrature, on an interpolation grid
  const int grid = 129;
  for (double th : {1.0, 2.0}) {
    std::vector<double> ts(grid), cdf(grid);
    for (int i = 0; i < grid; ++i) {
      ts[i] = 1.0 + static_cast<double>(i) / (grid - 1);
      cdf[i] = oracles::corner_kernel_x1_cdf(a, Theta(th), ts[i]);
    }
    auto cdf_interp = [&](double t) {
      if (t <= ts.front()) return 0.0;
      if (t >= ts.back()) return 1.0;
      auto it = std::upper_bound(ts.begin(), ts.end(), t);
      std::size_t j = it - ts.begin();
      double f = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
      return cdf[j - 1] + f * (cdf[j] - cdf[j - 1]);
    };
    for (Proposal p : {Proposal::beta_mh, Proposal::gibbs_inverse_cdf, Proposal::slice,
                       Proposal::dirichlet_roots}) {
      auto xs = corner_draws(a, Theta(th), fast_cfg(13, p), 4000, 0);
      auto ks = stats::ks_one_sample(xs, cdf_interp);
      INFO("theta ", th, " proposal ", static_cast<int>(p));
      CHECK(ks.p > 0.01);
    }
  }
}

TEST_CASE("root sampler agrees with long Gibbs runs away from n=1") {
  // same kernel, two very different algorithms
  OrderedTuple a = OrderedTuple::strict({3.0, 1.9, 0.8, 0.0});
  for (double th : {0.5, 2.0}) {
    for (int coord : {0, 1, 2}) {
      auto roots = corner_draws(a, Theta(th), fast_cfg(41, Proposal::dirichlet_roots), 5000,
                                coord);
      auto gibbs = corner_draws(a, Theta(th), fast_cfg(42, Proposal::beta_mh, 64), 5000, coord);
      auto ks = stats::ks_two_sample(roots, gibbs);
      INFO("theta ", th, " coord ", coord, " d=", ks.d);
      CHECK(ks.p > 0.01);
    }
  }
}

TEST_CASE("determinism: identical seed and config, bit-identical draws") {
  OrderedTuple a = OrderedTuple::strict({3.0, 2.0, 1.0, 0.0});
  SamplerConfig cfg = fast_cfg(99);
  std::vector<std::vector<double>> run1, run2;
  run_orbital_draws(a, 2, Theta(0.5), cfg, 50,
                    [&](std::size_t, const std::vector<std::vector<double>>& lv) {
                      run1.push_back(lv[0]);
                      run1.push_back(lv[1]);
                    });
  run_orbital_draws(a, 2, Theta(0.5), cfg, 50,
                    [&](std::size_t, const std::vector<std::vector<double>>& lv) {
                      run2.push_back(lv[0]);
                      run2.push_back(lv[1]);
                    });
  REQUIRE(run1.size() == run2.size());
  for (std::size_t i = 0; i < run1.size(); ++i) {
    CHECK(run1[i] == run2[i]);
  }
}

TEST_CASE("orbital levels: always strictly interlacing, with top context") {
  OrderedTuple a = OrderedTuple::strict({5.0, 4.2, 3.1, 2.0, 0.5, -1.0});
  Rng rng(4);
  SamplerConfig cfg = fast_cfg(4);
  for (int rep = 0; rep < 50; ++rep) {
    InterlacingArray tri = sample_orbital_levels(a, 3, Theta(0.7), cfg, rng);
    CHECK(tri.depth() == 3);
    CHECK(tri.has_top());  // construction itself validates the interlacing
  }
}

TEST_CASE("orbital levels N=2: bottom level is the transported Beta law") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.0});
  Rng rng(21);
  SamplerConfig cfg = fast_cfg(21);
  std::vector<double> xs(8000);
  for (auto& v : xs) v = sample_orbital_levels(a, 1, Theta(2.5), cfg, rng).level(1)[0];
  auto ks = stats::ks_one_sample(xs, [](double t) { return stats::beta_cdf(t, 2.5, 2.5); });
  CHECK(ks.p > 0.01);
}

TEST_CASE("theta=1: exact uniform path agrees with the MCMC path (N=4, m=2)") {
  OrderedTuple a = OrderedTuple::strict({2.0, 1.2, 0.7, 0.0});
  Rng rng(31);
  const int n_draws = 8000;
  std::vector<std::vector<double>> exact(3), mcmc(3);  // x_1^(1), x_1^(2), x_2^(2)
  for (int d = 0; d < n_draws; ++d) {
    InterlacingArray tri = sample_orbital_levels_uniform_theta1(a, 2, rng);
    exact[0].push_back(tri.level(1)[0]);
    exact[1].push_back(tri.level(2)[0]);
    exact[2].push_back(tri.level(2)[1]);
  }
  for (Proposal p : {Proposal::beta_mh, Proposal::dirichlet_roots}) {
    SamplerConfig cfg = fast_cfg(32, p);
    for (auto& v : mcmc) v.clear();
    run_orbital_draws(a, 2, Theta(1.0), cfg, n_draws,
                      [&](std::size_t, const std::vector<std::vector<double>>& lv) {
                        mcmc[0].push_back(lv[0][0]);
                        mcmc[1].push_back(lv[1][0]);
                        mcmc[2].push_back(lv[1][1]);
                      });
    for (int c = 0; c < 3; ++c) {
      auto ks = stats::ks_two_sample(exact[c], mcmc[c]);
      INFO("proposal ", static_cast<int>(p), " coordinate ", c, " d=", ks.d);
      CHECK(ks.p > 0.01);
    }
  }
}

TEST_CASE("stationarity smoke test: sweeps preserve an exact draw") {
  // Level 3 below the top at theta = 1 is an exact Dixon-Anderson draw via
  // the uniform-triangle path; Gibbs sweeps must leave its marginals alone.
  OrderedTuple a = OrderedTuple::strict({2.0, 1.2, 0.7, 0.0});
  Rng rng(77);
  SamplerConfig cfg = fast_cfg(77);
  const int n_draws = 6000;
  std::vector<std::vector<double>> fresh(3), swept(3);
  for (int d = 0; d < n_draws; ++d) {
    InterlacingArray t1 = sample_orbital_levels_uniform_theta1(a, 3, rng);
    for (int c = 0; c < 3; ++c) fresh[c].push_back(t1.level(3)[c]);
    InterlacingArray t2 = sample_orbital_levels_uniform_theta1(a, 3, rng);
    std::vector<double> x = t2.level(3);
    for (int s = 0; s < 10; ++s) detail::corner_sweep(a.values(), x, 1.0, cfg, rng);
    for (int c = 0; c < 3; ++c) swept[c].push_back(x[c]);
  }
  for (int c = 0; c < 3; ++c) {
    auto ks = stats::ks_two_sample(fresh[c], swept[c]);
    CHECK(ks.p > 0.01);
  }
}

TEST_CASE("gbe m=1: exact Gaussian moments") {
  Rng rng(5);
  SamplerConfig cfg = fast_cfg(5);
  const int n = 100000;
  std::vector<double> xs(n);
  for (auto& v : xs) v = sample_gbe(1, Theta(1.0), cfg, rng)[0];
  MCEstimate m1 = stats::sample_moment(xs, 1);
  MCEstimate m2 = stats::sample_moment(xs, 2);
  CHECK(std::abs(m1.mean.real()) < 3.0 * m1.stderror);
  CHECK(std::abs(m2.mean.real() - 1.0) < 3.0 * m2.stderror);
}

TEST_CASE("gbe macdonald-mehta observable (m=2, theta=1)") {
  // E[B_x(y1, y2; theta)] = exp((y1^2 + y2^2) / (2 theta)), the two-argument
  // Bessel evaluated by the N=2 quadrature oracle per draw.
  Theta th(1.0);
  SamplerConfig cfg = fast_cfg(6);
  cfg.burn_in = 300;
  cfg.thinning = 6;
  GbeChain chain(2, th, cfg, Rng(6));
  const int n = 4000;
  std::vector<double> stat(n);
  std::vector<bessel::cplx> y = {0.3, 0.1};
  for (int d = 0; d < n; ++d) {
    const std::vector<double>& x = chain.next();
    stat[d] = bessel::quadrature_small(OrderedTuple::strict(x), y, th).real();
  }
  MCEstimate est = stats::mc_estimate_real(stat);
  double predicted = std::exp((0.09 + 0.01) / 2.0);
  CHECK(std::abs(est.mean.real() - predicted) < 3.0 * est.stderror);
}

TEST_CASE("gbe draws are sorted with no ties") {
  Rng rng(8);
  SamplerConfig cfg = fast_cfg(8);
  cfg.burn_in = 100;
  for (int d = 0; d < 50; ++d) {
    OrderedTuple x = sample_gbe(3, Theta(0.5), cfg, rng);
    CHECK(x[0] > x[1]);
    CHECK(x[1] > x[2]);
  }
}

TEST_CASE("tridiagonal construction agrees with the MCMC chain") {
  Theta th(0.5);
  const int n = 6000;
  Rng rng(9);
  std::vector<std::vector<double>> tri_draws(3), mc_draws(3);
  for (int d = 0; d < n; ++d) {
    OrderedTuple x = sample_gbe_tridiagonal(3, th, rng);
    for (int c = 0; c < 3; ++c) tri_draws[c].push_back(x[c]);
  }
  SamplerConfig cfg = fast_cfg(10);
  cfg.burn_in = 400;
  cfg.thinning = 8;
  GbeChain chain(3, th, cfg, Rng(10));
  for (int d = 0; d < n; ++d) {
    const std::vector<double>& x = chain.next();
    for (int c = 0; c < 3; ++c) mc_draws[c].push_back(x[c]);
  }
  for (int c = 0; c < 3; ++c) {
    auto ks = stats::ks_two_sample(tri_draws[c], mc_draws[c]);
    INFO("coordinate ", c, " d=", ks.d);
    CHECK(ks.p > 0.01);
  }
}

TEST_CASE("gbe corners: level-1 marginal of m=3 corners is rank-1 GbE") {
  Theta th(1.0);
  SamplerConfig cfg = fast_cfg(14);
  cfg.burn_in = 200;
  cfg.thinning = 5;
  const int n = 6000;
  std::vector<double> level1(n);
  run_gbe_corners_draws(3, th, cfg, n,
                        [&](std::size_t d, const std::vector<std::vector<double>>& lv) {
                          level1[d] = lv[0][0];
                        });
  auto ks = stats::ks_one_sample(level1, [](double t) { return stats::normal_cdf(t); });
  CHECK(ks.p > 0.01);
}

TEST_CASE("gbe corners: m=2 top-level gap mean matches 2-d quadrature") {
  Theta th(2.0);
  const double bound = 8.0;
  auto inner = [&](double x1) {
    auto f = [&](double x2) -> quad::cplx {
      return (x1 - x2) * std::exp(log_gbe_density(OrderedTuple::weak({x1, x2}), th));
    };
    return quad::integrate(f, -bound, x1, 1e-12, 1e-9, 600).value;
  };
  double expect =
      quad::integrate([&](double x1) { return inner(x1); }, -bound, bound, 1e-12, 1e-8, 600)
          .value.real();
  SamplerConfig cfg = fast_cfg(15);
  cfg.burn_in = 300;
  cfg.thinning = 6;
  const int n = 8000;
  std::vector<double> gaps(n);
  run_gbe_corners_draws(2, th, cfg, n,
                        [&](std::size_t d, const std::vector<std::vector<double>>& lv) {
                          gaps[d] = lv[1][0] - lv[1][1];
                        });
  MCEstimate est = stats::mc_estimate_real(gaps);
  CHECK(std::abs(est.mean.real() - expect) < 3.0 * est.stderror);
}

TEST_CASE("benchmark: downward chain at N=200") {
  std::vector<double> av(200);
  for (int i = 0; i < 200; ++i) av[i] = 200.0 - i + ((i % 2) ? 0.3 : 0.0);
  OrderedTuple a = OrderedTuple::strict(std::move(av));
  for (Proposal p : {Proposal::beta_mh, Proposal::dirichlet_roots}) {
    SamplerConfig cfg = fast_cfg(1, p, 8);
    cfg.chains = 2;
    auto t0 = std::chrono::steady_clock::now();
    const std::size_t draws = 20;
    run_orbital_draws(a, 2, Theta(0.5), cfg, draws,
                      [&](std::size_t, const std::vector<std::vector<double>>&) {});
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "[bench] N=200 " << (p == Proposal::beta_mh ? "beta_mh burn=8" : "roots")
              << ": " << 1e3 * dt / draws << " ms/draw wall (2 chains)\n";
    CHECK(dt < 60.0);
  }
}
