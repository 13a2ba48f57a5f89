#include <doctest.h>

#include <cmath>
#include <random>

#include "obp/densities.hpp"
#include "obp/oracles.hpp"
#include "obp/quadrature.hpp"
#include "obp/stats.hpp"

using namespace obp;

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

// Any valid triangle below a random top: levels filled uniformly inside the
// gaps of the level above.
InterlacingArray random_triangle(std::size_t n, std::mt19937_64& gen, double span = 3.0) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> top(n);
  for (auto& v : top) v = span * (2.0 * unif(gen) - 1.0);
  std::sort(top.begin(), top.end(), std::greater<double>());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (top[i] - top[i + 1] < 1e-3) top[i] += 1e-2 * (n - i);
  }
  std::sort(top.begin(), top.end(), std::greater<double>());
  std::vector<std::vector<double>> levels(n - 1);
  const std::vector<double>* above = &top;
  for (std::size_t k = n - 1; k >= 1; --k) {
    std::vector<double> lev(k);
    for (std::size_t r = 0; r < k; ++r) {
      double lo = (*above)[r + 1], hi = (*above)[r];
      lev[r] = lo + (hi - lo) * (0.05 + 0.9 * unif(gen));
    }
    levels[k - 1] = std::move(lev);
    above = &levels[k - 1];
    if (k == 1) break;
  }
  return InterlacingArray(std::move(levels), top);
}

}  // namespace

TEST_CASE("orbital density: theta=1 uniform case") {
  InterlacingArray tri({{0.3}}, std::vector<double>{1.0, 0.0});
  CHECK(log_orbital_density(tri, Theta(1.0)) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("orbital density: coincident points raise / neg-inf per policy") {
  // a cross-level tie, shaped like a file round-trip artifact
  InterlacingArray tied = InterlacingArray::from_file(
      {{0.3}, {0.8, 0.3}}, std::optional<std::vector<double>>{{1.0, 0.6, 0.0}}, 1e-6);
  CHECK_THROWS_AS(log_orbital_density(tied, Theta(2.0)), domain_error);
  CHECK(log_orbital_density(tied, Theta(2.0), BoundaryPolicy::neg_inf) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("orbital density: theta=1/2 arcsine level") {
  // density (1/pi) x^{-1/2} (1-x)^{-1/2} on (0,1); at x = 1/2 this is 2/pi.
  InterlacingArray tri({{0.5}}, std::vector<double>{1.0, 0.0});
  CHECK(log_orbital_density(tri, Theta(0.5)) ==
        doctest::Approx(std::log(2.0 / kPi)).epsilon(1e-12));
}

TEST_CASE("orbital normalization against quadrature oracle") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.0});
  // theta = 1: all factors are 1
  CHECK(log_orbital_normalization(a, Theta(1.0)) == doctest::Approx(0.0).epsilon(1e-14));
  // theta = 1/2: integral of x^{-1/2}(1-x)^{-1/2} = pi
  double mass = oracles::orbital_unnormalized_mass(a, Theta(0.5), 1e-10);
  CHECK(mass == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(log_orbital_normalization(a, Theta(0.5)) == doctest::Approx(std::log(kPi)).epsilon(1e-12));
  // generic N = 2 closed form Gamma(t)^2/Gamma(2t) (a1-a2)^{2t-1}
  OrderedTuple b = OrderedTuple::strict({2.3, -0.7});
  for (double th : {0.5, 1.0, 2.0, 3.7}) {
    double expect = 2.0 * std::lgamma(th) - std::lgamma(2.0 * th) +
                    (2.0 * th - 1.0) * std::log(3.0);
    CHECK(log_orbital_normalization(b, Theta(th)) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("orbital normalization rejects near-degenerate labels") {
  OrderedTuple a = OrderedTuple::strict({1.0, 1.0 - 1e-15, 0.0});
  CHECK_THROWS_AS(log_orbital_normalization(a, Theta(2.0)), domain_error);
}

TEST_CASE("orbital normalization depends only on gaps (shift invariance)") {
  OrderedTuple a = OrderedTuple::strict({1.5, 0.25, -0.75});
  OrderedTuple b = OrderedTuple::strict({1.5 + 1024.0, 0.25 + 1024.0, -0.75 + 1024.0});
  for (double th : {0.5, 1.3, 2.0}) {
    CHECK(log_orbital_normalization(a, Theta(th)) == log_orbital_normalization(b, Theta(th)));
  }
}

TEST_CASE("gbe density basics") {
  CHECK(log_gbe_density(OrderedTuple::weak({0.0}), Theta(1.0)) ==
        doctest::Approx(std::log(1.0 / std::sqrt(2.0 * kPi))).epsilon(1e-13));
  CHECK(log_gbe_density(OrderedTuple::weak({0.7, 0.7}), Theta(1.5)) ==
        -std::numeric_limits<double>::infinity());
  // ratio of densities at (1,-1) and (2,-2) for theta = 1 is e^3/4
  double lr = log_gbe_density(OrderedTuple::weak({1.0, -1.0}), Theta(1.0)) -
              log_gbe_density(OrderedTuple::weak({2.0, -2.0}), Theta(1.0));
  CHECK(lr == doctest::Approx(3.0 - std::log(4.0)).epsilon(1e-13));
}

TEST_CASE("gbe normalization integrates to one (m=2)") {
  for (double th : {0.5, 1.0, 2.0}) {
    CHECK(oracles::gbe_mass_m2(Theta(th), 1e-9) == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("gbe corners reduces to gbe at m=1") {
  InterlacingArray tri(std::vector<std::vector<double>>{{0.4}});
  for (double th : {0.5, 1.0, 2.7}) {
    CHECK(log_gbe_corners_density(tri, Theta(th)) ==
          doctest::Approx(log_gbe_density(OrderedTuple::weak({0.4}), Theta(th))).epsilon(1e-13));
  }
}

TEST_CASE("gbe corners density: theta=1 has no interior dependence") {
  // at theta = 1 the density depends on x^{(1)} only through interlacing
  InterlacingArray t1({{0.2}, {1.0, -0.5}});
  InterlacingArray t2({{0.9}, {1.0, -0.5}});
  Theta th(1.0);
  CHECK(log_gbe_corners_density(t1, th) == doctest::Approx(log_gbe_corners_density(t2, th)));
  // explicit value: (1/Z)(x1-x2) e^{-(x1^2+x2^2)/2}
  double expect = std::log(1.5) - 0.5 * (1.0 + 0.25) - log_gbe_corners_normalization(2, th);
  CHECK(log_gbe_corners_density(t1, th) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("gbe corners normalization integrates to one (m=2)") {
  for (double th : {0.5, 1.0, 2.0}) {
    CHECK(oracles::gbe_corners_mass_m2(Theta(th), 1e-5) == doctest::Approx(1.0).epsilon(5e-4));
  }
}

TEST_CASE("theta-gibbs conditional: explicit n=1 form") {
  double a1 = 1.3, a2 = -0.4, x = 0.6;
  for (double th : {0.5, 1.0, 2.2}) {
    InterlacingArray lower(std::vector<std::vector<double>>{{x}});
    double got = log_theta_gibbs_conditional(lower, OrderedTuple::strict({a1, a2}), Theta(th));
    double expect = std::lgamma(2.0 * th) - 2.0 * std::lgamma(th) +
                    (1.0 - 2.0 * th) * std::log(a1 - a2) +
                    (th - 1.0) * (std::log(a1 - x) + std::log(x - a2));
    CHECK(got == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("theta-gibbs conditional: theta=1 is minus log polytope volume") {
  OrderedTuple given = OrderedTuple::strict({2.0, 1.0, 0.0});
  // vol P((2,1,0)) = prod gaps / (1! 2!)^... = (1*2*1)/2 = 1
  InterlacingArray lower({{1.2}, {1.7, 0.6}});
  CHECK(log_theta_gibbs_conditional(lower, given, Theta(1.0)) ==
        doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("theta-gibbs conditional integrates to one (n=2, theta=2)") {
  double mass = oracles::gibbs_conditional_mass(OrderedTuple::strict({2.0, 1.0, 0.0}),
                                                Theta(2.0), 1e-5);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("corner kernel: n=1 is the transported Beta(theta,theta) law") {
  OrderedTuple a = OrderedTuple::strict({1.5, -0.5});
  for (double th : {0.5, 1.0, 3.0}) {
    // CDF comparison at a few interior points
    for (double u : {0.2, 0.5, 0.85}) {
      double t = -0.5 + 2.0 * u;
      auto f = [&](double z, double, double) -> quad::cplx {
        if (!(z > -0.5 && z < 1.5)) return 0.0;
        return std::exp(log_corner_kernel(a, OrderedTuple::strict({z}), Theta(th),
                                          BoundaryPolicy::neg_inf));
      };
      double cdf = quad::integrate_singular(f, -0.5, t, 1e-14, 1e-10, 2000).value.real();
      CHECK(cdf == doctest::Approx(stats::beta_cdf(u, th, th)).epsilon(1e-7));
    }
  }
  // theta = 1: kernel is uniform 1/(a1 - a2)
  CHECK(log_corner_kernel(a, OrderedTuple::strict({0.3}), Theta(1.0)) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("corner kernel constant self-test: mass = 1 for n=2") {
  // mandatory oracle for the derived Gamma((n+1)theta)/Gamma(theta)^{n+1}
  OrderedTuple a = OrderedTuple::strict({3.0, 1.0, 0.0});
  for (double th : {0.5, 1.0, 2.0}) {
    CHECK(oracles::corner_kernel_mass(a, Theta(th), 1e-8) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(log_corner_kernel(a, OrderedTuple::strict({2.0, 1.5}), Theta(1.0)),
                  domain_error);
}

TEST_CASE("factorization: orbital density equals the kernel chain") {
  std::mt19937_64 gen(42);
  for (double th : {0.5, 1.0, 2.0}) {
    for (int rep = 0; rep < 34; ++rep) {
      std::size_t n = 2 + gen() % 5;  // N in [2, 6]
      InterlacingArray tri = random_triangle(n, gen);
      double lhs = log_orbital_density(tri, Theta(th));
      double rhs = 0.0;
      for (std::size_t k = n - 1; k >= 1; --k) {
        const std::vector<double>& upper = (k == n - 1) ? tri.top() : tri.level(k + 1);
        rhs += log_corner_kernel(OrderedTuple::strict(upper),
                                 OrderedTuple::strict(tri.level(k)), Theta(th));
        if (k == 1) break;
      }
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("conditional consistency: gibbs equals summed kernels") {
  std::mt19937_64 gen(7);
  for (double th : {0.5, 1.0, 2.0}) {
    InterlacingArray tri = random_triangle(5, gen);
    // condition on level 4 = tri.level(4), lower stack = levels 1..3
    std::vector<std::vector<double>> lower(tri.levels().begin(), tri.levels().begin() + 3);
    InterlacingArray stack(lower);
    double lhs = log_theta_gibbs_conditional(stack, OrderedTuple::strict(tri.level(4)),
                                             Theta(th));
    double rhs = 0.0;
    for (std::size_t k = 3; k >= 1; --k) {
      rhs += log_corner_kernel(OrderedTuple::strict(tri.level(k + 1)),
                               OrderedTuple::strict(tri.level(k)), Theta(th));
      if (k == 1) break;
    }
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("measure stats") {
  EmpiricalMeasure delta0({{0.0, 1.0}}, 1.0);
  CHECK(delta0.mean() == 0.0);
  CHECK(delta0.variance() == 0.0);
  EmpiricalMeasure two({{1.0, 0.5}, {-1.0, 0.5}}, 1.0);
  CHECK(two.mean() == doctest::Approx(0.0));
  CHECK(two.variance() == doctest::Approx(1.0));
  CHECK(two.moment(4) == doctest::Approx(1.0));
  // mu_N from a tuple: mean = |a| / N^2
  OrderedTuple a = OrderedTuple::strict({4.0, 1.0, -2.0});
  EmpiricalMeasure mu = EmpiricalMeasure::from_tuple(a, 3);
  CHECK(mu.mean() == doctest::Approx(a.sum() / 9.0).epsilon(1e-14));
}

TEST_CASE("type invariants") {
  CHECK_THROWS_AS(OrderedTuple::strict({1.0, 1.0}), domain_error);
  CHECK_NOTHROW(OrderedTuple::weak({1.0, 1.0}));
  CHECK_THROWS_AS(OrderedTuple::weak({0.0, 1.0}), domain_error);
  CHECK_THROWS_AS(Theta(0.0), domain_error);
  CHECK_THROWS_AS(Theta(-1.0), domain_error);
  CHECK_THROWS_AS(EmpiricalMeasure({{0.0, 0.5}}, 1.0), domain_error);   // weights sum != 1
  CHECK_THROWS_AS(EmpiricalMeasure({{2.0, 1.0}}, 1.0), domain_error);   // outside support
  CHECK_THROWS_AS(InterlacingArray({{0.5}, {1.0, 0.6}}), domain_error); // 0.5 < 0.6
  // file-tolerance path accepts a 1e-13 inversion, rejects 1e-9
  CHECK_NOTHROW(OrderedTuple::strict_from_file({1.0, 1.0 + 1e-13}));
  CHECK_THROWS_AS(OrderedTuple::strict_from_file({1.0, 1.0 + 1e-9}), domain_error);
}
