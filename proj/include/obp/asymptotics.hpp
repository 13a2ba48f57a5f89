#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "obp/sampling.hpp"
#include "obp/types.hpp"

namespace obp::lab {

// Monotone nondecreasing quantile table x(u), u in [0, 1], interpolated
// piecewise-linearly.
struct QuantileTable {
  std::vector<double> u;
  std::vector<double> x;
};

// Source of label tuples a(N): either an atomic measure or a quantile table,
// plus the ladder of sizes to generate.
struct RegularSequenceSpec {
  std::optional<EmpiricalMeasure> measure;
  std::optional<QuantileTable> table;
  std::vector<std::size_t> sizes;

  static RegularSequenceSpec two_atom();  // (delta_1 + delta_{-1}) / 2
  static RegularSequenceSpec uniform();   // uniform on [-1, 1] as a table
  static RegularSequenceSpec point_mass(double c);

  double limit_mean() const;
  double limit_variance() const;
  double support_bound() const;
  // Upper quantile map: q(1 - p) style access used to build decreasing tuples.
  double quantile(double u) const;
};

struct BuiltSequence {
  OrderedTuple a;
  EmpiricalMeasure mu_n;
  double tie_epsilon = 0.0;  // 0 when no tie-break was needed
  double growth_constant = 0.0;  // max(|a_1|, |a_N|) / N
};

// a(N)_i = N q((i - 1/2)/N) sorted strictly decreasing; exact ties broken by
// subtracting i * eps_N with eps_N = 1e-9 N. The (i - 1/2)/N grid keeps
// symmetric measures exactly centered.
BuiltSequence build_regular_sequence(const RegularSequenceSpec& spec, std::size_t n);

// Unique root z0 > max support of  y / (theta sqrt(N)) = sum w_i / (z0 - t_i),
// by bracketed bisection plus Newton polish, residual below 1e-12 relative.
double critical_point(const EmpiricalMeasure& mu_n, double y, Theta theta, std::size_t n);

struct SteepestResult {
  double log_value = 0.0;
  double z0 = 0.0;
  double neg_w2 = 0.0;  // -w''(z0) > 0
  double h_at_z0 = 0.0;
};

// Laplace/steepest-descent evaluation of log B_a(y / sqrt(N), 0^{N-1}) for
// centered labels and real y > 0. All measure integrals use mu_N itself, so
// the phi correction factor is identically one and the estimate targets the
// finite-N integral.
SteepestResult bessel_steepest_m1(const OrderedTuple& a, double y, Theta theta);

struct ReportRow {
  std::string label;
  double observed = 0.0;
  double predicted = 0.0;
  double delta = 0.0;
  double stderror = 0.0;
};

struct ExperimentReport {
  std::string name;
  std::uint64_t seed = 0;
  bool pass = false;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;
  double runtime_seconds = 0.0;  // informational; never serialized into data files
};

// Ladder experiment for the Bessel limit: for each N in spec.sizes compares
// log[B_{a(N)}(y/sqrt(N)) e^{-sqrt(N) E[mu_N] sum y}] against
// Var[mu] sum y_i^2 / (2 theta). m = 1 runs on the contour evaluator and
// passes iff the deviations decrease along the ladder with the final one
// under final_tol; m in {2, 3} uses the MC evaluator and a 3-stderr band.
ExperimentReport verify_bessel_asymptotics(const RegularSequenceSpec& spec,
                                           std::span<const double> y, Theta theta,
                                           const SamplerConfig& cfg, std::size_t mc_draws,
                                           double final_tol);

struct UniversalityConfig {
  std::size_t n = 200;
  std::size_t m = 2;
  std::size_t draws = 10000;
  bool null_test = false;  // redraw the top level from sqrt(N) * GbE_N each draw
  double ks_alpha = 0.01;
  double moment_band_sigmas = 3.0;
};

// Rescaled bottom-corner statistics of the orbital process against a
// GbE-corners reference sample: per-coordinate two-sample KS plus the first
// four moments of the largest particle of level m. Both the Var[mu] and the
// Var[mu_N] scalings are reported; the pass decision uses Var[mu].
ExperimentReport verify_universality(const RegularSequenceSpec& spec, Theta theta,
                                     const SamplerConfig& cfg, const UniversalityConfig& ucfg);

}  // namespace obp::lab
