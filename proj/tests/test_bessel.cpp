#include <doctest.h>

#include <cmath>
#include <complex>

#include "obp/bessel.hpp"
#include "obp/sampling.hpp"
#include "obp/stats.hpp"

using namespace obp;
using bessel::cplx;

namespace {

SamplerConfig mc_cfg(std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.seed = seed;
  cfg.chains = 2;
  cfg.burn_in = 16;
  cfg.proposal = Proposal::beta_mh;
  return cfg;
}

std::vector<cplx> pad(std::initializer_list<cplx> ys, std::size_t n) {
  std::vector<cplx> out(ys);
  out.resize(n, cplx(0.0, 0.0));
  return out;
}

}  // namespace

TEST_CASE("oracle N=1: pure exponential") {
  OrderedTuple a = OrderedTuple::strict({2.0});
  auto v = bessel::quadrature_small(a, pad({cplx(0.5, 0.0)}, 1), Theta(1.0));
  CHECK(v.real() == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("oracle N=2 theta=1: (e^t - 1)/t") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.0});
  for (double t : {0.5, 1.0, 2.0}) {
    auto v = bessel::quadrature_small(a, pad({cplx(t, 0.0)}, 2), Theta(1.0));
    CHECK(v.real() == doctest::Approx((std::exp(t) - 1.0) / t).epsilon(1e-9));
    CHECK(std::abs(v.imag()) < 1e-12);
  }
}

TEST_CASE("oracle normalization: B(0) = 1 for all supported N") {
  for (double th : {0.5, 1.0, 2.3}) {
    CHECK(bessel::quadrature_small(OrderedTuple::strict({0.7}), pad({}, 1), Theta(th)).real() ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(bessel::quadrature_small(OrderedTuple::strict({1.4, -0.2}), pad({}, 2), Theta(th))
              .real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(bessel::quadrature_small(OrderedTuple::strict({1.0, 0.0, -1.0}), pad({}, 3), Theta(th))
              .real() == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("oracle symmetry in y") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.2, -0.8});
  Theta th(1.5);
  auto v1 = bessel::quadrature_small(a, pad({cplx(0.7, 0.0), cplx(0.3, 0.0), cplx(-0.4, 0.0)}, 3), th);
  auto v2 = bessel::quadrature_small(a, pad({cplx(-0.4, 0.0), cplx(0.7, 0.0), cplx(0.3, 0.0)}, 3), th);
  CHECK(v1.real() == doctest::Approx(v2.real()).epsilon(1e-7));
}

TEST_CASE("oracle modulus bound |B(y)| <= B(Re y) on a grid (N=2)") {
  OrderedTuple a = OrderedTuple::strict({0.9, -0.3});
  Theta th(0.7);
  for (double re : {-0.5, 0.2, 1.0}) {
    for (double im : {0.5, 2.0}) {
      auto v = bessel::quadrature_small(a, pad({cplx(re, im), cplx(0.0, 0.0)}, 2), th);
      auto bound = bessel::quadrature_small(a, pad({cplx(re, 0.0), cplx(0.0, 0.0)}, 2), th);
      CHECK(std::abs(v) <= bound.real() * (1.0 + 1e-9));
    }
  }
  // purely imaginary arguments stay inside the unit disc
  auto v = bessel::quadrature_small(a, pad({cplx(0.0, 1.7), cplx(0.0, -0.4)}, 2), th);
  CHECK(std::abs(v) <= 1.0 + 1e-9);
}

TEST_CASE("contour N=2 theta=1 y=1 equals e - 1") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.0});
  auto res = bessel::contour_m1(a, 1.0, Theta(1.0));
  CHECK(res.value.real() == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-8));
  CHECK(res.rel_error < 1e-7);
}

TEST_CASE("contour matches the oracle (N=3)") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.0, -1.0});
  for (double th : {1.0, 2.0}) {
    for (double y : {0.5, 1.5}) {
      auto res = bessel::contour_m1(a, y, Theta(th));
      auto ref = bessel::quadrature_small(a, pad({cplx(y, 0.0)}, 3), Theta(th)).real();
      CHECK(res.value.real() == doctest::Approx(ref).epsilon(1e-6));
    }
  }
}

TEST_CASE("contour handles negative y through the mirror route") {
  OrderedTuple a = OrderedTuple::strict({0.8, 0.1, -0.5});
  auto res = bessel::contour_m1(a, -0.9, Theta(1.0));
  auto ref = bessel::quadrature_small(a, pad({cplx(-0.9, 0.0)}, 3), Theta(1.0)).real();
  CHECK(res.value.real() == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("contour preconditions") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.0});
  CHECK_THROWS_AS(bessel::contour_m1(a, 1.0, Theta(0.5)), precondition_error);  // N theta = 1
  CHECK_THROWS_AS(bessel::contour_m1(a, 0.0, Theta(1.0)), precondition_error);
}

TEST_CASE("contour shift and scale identities") {
  OrderedTuple a = OrderedTuple::strict({1.2, 0.3, -0.6});
  Theta th(2.0);
  double y = 0.8;
  auto base = bessel::contour_m1(a, y, th);
  // shift: labels + r multiply the value by e^{r y}
  double r = 0.5;
  OrderedTuple shifted = OrderedTuple::strict({1.7, 0.8, -0.1});
  auto sh = bessel::contour_m1(shifted, y, th);
  CHECK(sh.log_abs - base.log_abs == doctest::Approx(r * y).epsilon(1e-8));
  // scale: B_{c a}(y) = B_a(c y), c = 2
  OrderedTuple doubled = OrderedTuple::strict({2.4, 0.6, -1.2});
  auto sc1 = bessel::contour_m1(doubled, y, th);
  auto sc2 = bessel::contour_m1(a, 2.0 * y, th);
  CHECK(sc1.log_abs == doctest::Approx(sc2.log_abs).epsilon(1e-8));
}

TEST_CASE("contour at larger N stays sane against steepest scaling") {
  // value should be finite and positive with a small reported error
  std::vector<double> av(50);
  for (int i = 0; i < 50; ++i) av[i] = 50.0 - 2.0 * i;
  auto res = bessel::contour_m1(OrderedTuple::strict(av), 0.1, Theta(1.0));
  CHECK(std::isfinite(res.log_abs));
  CHECK(res.rel_error < 1e-6);
}

TEST_CASE("theta0 closed form") {
  std::vector<cplx> a = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
  for (double t : {0.3, 1.1}) {
    auto v = bessel::theta0(a, pad({cplx(t, 0.0)}, 2));
    CHECK(v.real() == doctest::Approx(std::cosh(t)).epsilon(1e-13));
  }
  CHECK(bessel::theta0(a, pad({}, 2)).real() == doctest::Approx(1.0));
  // invariance under simultaneous permutation
  std::vector<cplx> a3 = {cplx(0.5, 0.0), cplx(0.1, 0.0), cplx(-0.2, 0.0)};
  std::vector<cplx> y3 = {cplx(0.4, 0.2), cplx(-0.1, 0.0), cplx(0.9, 0.0)};
  std::vector<cplx> a3p = {a3[2], a3[0], a3[1]};
  std::vector<cplx> y3p = {y3[2], y3[0], y3[1]};
  auto v1 = bessel::theta0(a3, y3);
  auto v2 = bessel::theta0(a3p, y3p);
  CHECK(std::abs(v1 - v2) < 1e-13);
  std::vector<cplx> big(9, cplx(0.0, 0.0));
  CHECK_THROWS_AS(bessel::theta0(big, big), precondition_error);
}

TEST_CASE("mc evaluator: N=2 cross-check against the oracle") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.0});
  Theta th(0.5);
  std::vector<cplx> y = {cplx(0.7, 0.0), cplx(0.2, 0.0)};
  MCEstimate est = bessel::mc(a, y, th, mc_cfg(3), 20000);
  auto ref = bessel::quadrature_small(a, y, th).real();
  CHECK(std::abs(est.mean.real() - ref) < 3.0 * est.stderror);
}

TEST_CASE("mc evaluator: purely imaginary arguments stay bounded") {
  OrderedTuple a = OrderedTuple::strict({2.0, 0.5, -1.0});
  MCEstimate est = bessel::mc(a, pad({cplx(0.0, 0.8), cplx(0.0, -0.3)}, 2), Theta(1.0),
                              mc_cfg(4), 8000);
  CHECK(std::abs(est.mean) <= 1.0 + 3.0 * est.stderror);
}

TEST_CASE("mc evaluator: label-shift identity within MC error") {
  Theta th(1.0);
  std::vector<cplx> y = {cplx(0.4, 0.0), cplx(0.1, 0.0)};
  OrderedTuple a = OrderedTuple::strict({1.5, 0.4, -0.9});
  OrderedTuple ar = OrderedTuple::strict({2.0, 0.9, -0.4});  // a + 0.5
  MCEstimate e1 = bessel::mc(a, y, th, mc_cfg(5), 20000);
  MCEstimate e2 = bessel::mc(ar, y, th, mc_cfg(6), 20000);
  double factor = std::exp(0.5 * (0.4 + 0.1));
  double se = std::hypot(factor * e1.stderror, e2.stderror);
  CHECK(std::abs(e2.mean.real() - factor * e1.mean.real()) < 3.0 * se);
}

TEST_CASE("recentre labels") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.0});
  auto [b, r] = bessel::recentre_labels(a);
  CHECK(r == doctest::Approx(0.5));
  CHECK(b[0] == doctest::Approx(0.5));
  CHECK(b[1] == doctest::Approx(-0.5));
  CHECK(std::abs(b.sum()) <= 1e-12);
  // fixed point
  auto [b2, r2] = bessel::recentre_labels(b);
  CHECK(r2 == 0.0);
  CHECK(b2.values() == b.values());
  // oracle check of the shift compensation at N=2
  Theta th(1.3);
  std::vector<cplx> y = {cplx(0.6, 0.0), cplx(-0.2, 0.0)};
  auto va = bessel::quadrature_small(a, y, th);
  auto vb = bessel::quadrature_small(b, y, th);
  CHECK(vb.real() == doctest::Approx(va.real() * std::exp(-r * 0.4)).epsilon(1e-8));
}

TEST_CASE("pieri m=1: deterministic N=2 check") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.0});
  auto res = bessel::pieri_check_m1(a, 1.0, 0.5, Theta(1.0), mc_cfg(7), 0);
  CHECK(res.rhs == doctest::Approx(res.lhs).epsilon(1e-6));
  // lhs from the closed theta=1 forms: B(-y) = (1 - e^{-y})/y
  double b1 = (1.0 - std::exp(-1.0)) / 1.0;
  double b2 = (1.0 - std::exp(-0.5)) / 0.5;
  CHECK(res.lhs == doctest::Approx(b1 * b2).epsilon(1e-8));
}

TEST_CASE("pieri m=1: theta < 1 singular integrand is handled") {
  OrderedTuple a = OrderedTuple::strict({2.0, 1.0, 0.0});
  auto res = bessel::pieri_check_m1(a, 0.9, 0.4, Theta(0.75), mc_cfg(8), 0);
  CHECK(res.rhs == doctest::Approx(res.lhs).epsilon(1e-5));
}

TEST_CASE("pieri m=1: argument constraints") {
  OrderedTuple a = OrderedTuple::strict({1.0, 0.0});
  CHECK_THROWS_AS(bessel::pieri_check_m1(a, 0.5, 0.5, Theta(1.0), mc_cfg(9), 0), domain_error);
  CHECK_THROWS_AS(bessel::pieri_check_m1(a, 0.5, -0.1, Theta(1.0), mc_cfg(9), 0), domain_error);
}
