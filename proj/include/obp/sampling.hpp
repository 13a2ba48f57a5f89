#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "obp/rng.hpp"
#include "obp/types.hpp"

namespace obp {

// Level-sampling scheme for the Dixon-Anderson corner steps.
//   gibbs_inverse_cdf : Gibbs sweeps; tabulated inverse CDF of the exact full
//                       conditional on a stretched grid (absorbs the endpoint
//                       singularities at theta < 1).
//   slice             : Gibbs sweeps; slice sampling of the full conditional.
//   beta_mh           : Gibbs sweeps; independence Metropolis-Hastings with a
//                       Beta(theta,theta) proposal per gap. The two adjacent
//                       singular factors cancel in the acceptance ratio,
//                       leaving a smooth bounded remainder.
//   dirichlet_roots   : exact draw: with weights w ~ Dirichlet(theta, ...,
//                       theta), the roots of sum_s w_s / (z - a_s) interlace
//                       a and carry exactly the corner-kernel density. No
//                       burn-in; one safeguarded root solve per gap. Used by
//                       the long downward chains, where Gibbs equilibration
//                       per level is both too slow and a bias risk.
enum class Proposal { gibbs_inverse_cdf, slice, beta_mh, dirichlet_roots };

struct SamplerConfig {
  std::uint64_t seed = 0;
  int chains = 1;
  int burn_in = 500;  // Gibbs sweeps before a corner-step draw is taken
  int thinning = 10;  // sweeps between retained draws of persistent chains
  Proposal proposal = Proposal::gibbs_inverse_cdf;
  int quadrature_nodes = 64;  // grid size for inverse-CDF tabulation

  void validate() const {
    if (chains < 1) throw domain_error("chains must be >= 1");
    if (burn_in < 0) throw domain_error("burn_in must be >= 0");
    if (thinning < 1) throw domain_error("thinning must be >= 1");
    if (quadrature_nodes < 8) throw domain_error("quadrature_nodes must be >= 8");
  }
};

// One draw from the Dixon-Anderson kernel a (length n+1) -> x (length n).
// n = 1 is exact (Beta(theta,theta) transported to the gap); otherwise runs
// cfg.burn_in Gibbs sweeps from a fresh per-gap Beta initialization.
OrderedTuple sample_corner_step(const OrderedTuple& a, Theta theta, const SamplerConfig& cfg,
                                Rng& rng);

// Downward-chain sample of the orbital beta process with top level a:
// levels N-1, N-2, ..., 1 drawn sequentially; the bottom m are returned,
// with the level directly above (or a itself when m = N-1) attached as top.
InterlacingArray sample_orbital_levels(const OrderedTuple& a, std::size_t m, Theta theta,
                                       const SamplerConfig& cfg, Rng& rng);

// Exact theta = 1 path: the whole triangle is uniform on the interlacing
// polytope; rejection sampling with per-gap box proposals. Acceptance decays
// quickly with N, so this is a validation tool for small N.
InterlacingArray sample_orbital_levels_uniform_theta1(const OrderedTuple& a, std::size_t m,
                                                      Rng& rng);

// One Gaussian beta ensemble draw. m = 1 is exact; otherwise a fresh
// slice-within-Gibbs chain on the log density is burned in and one state is
// returned. For bulk draws use GbeChain.
OrderedTuple sample_gbe(std::size_t m, Theta theta, const SamplerConfig& cfg, Rng& rng);

// Exact tridiagonal construction (chi off-diagonals, Gaussian diagonal),
// rescaled to the exp(-theta x^2 / 2) weight. Optional alternative path;
// the MCMC chain above is the reference implementation and the two are
// cross-validated in the test suite.
OrderedTuple sample_gbe_tridiagonal(std::size_t m, Theta theta, Rng& rng);

// Persistent GbE chain: burn once, then take one state every `thinning`
// sweeps.
class GbeChain {
 public:
  GbeChain(std::size_t m, Theta theta, const SamplerConfig& cfg, Rng rng);
  const std::vector<double>& next();
  const std::vector<double>& state() const { return x_; }
  void sweep();

 private:
  double theta_;
  int thinning_;
  std::vector<double> x_;  // decreasing
  Rng rng_;
};

// Gaussian beta corners draw: GbE top level, then Dixon-Anderson steps down.
InterlacingArray sample_gbe_corners(std::size_t m, Theta theta, const SamplerConfig& cfg,
                                    Rng& rng);

// Runs `draws` orbital-process draws (bottom m levels) over cfg.chains
// parallel chains with split RNG streams. Results are keyed by draw index,
// so output is bit-identical for a fixed (seed, cfg) regardless of thread
// scheduling. collect receives per-draw bottom levels, lowest first.
void run_orbital_draws(
    const OrderedTuple& a, std::size_t m, Theta theta, const SamplerConfig& cfg,
    std::size_t draws,
    const std::function<void(std::size_t, const std::vector<std::vector<double>>&)>& collect);

// Same chain layout for GbE-corners reference draws.
void run_gbe_corners_draws(
    std::size_t m, Theta theta, const SamplerConfig& cfg, std::size_t draws,
    const std::function<void(std::size_t, const std::vector<std::vector<double>>&)>& collect);

namespace detail {
// Raw corner step on plain vectors (a has n+1 entries, x gets n).
void corner_step_inplace(const std::vector<double>& a, std::vector<double>& x, double theta,
                         const SamplerConfig& cfg, Rng& rng);
// One Gibbs sweep over all coordinates of x given the level above.
void corner_sweep(const std::vector<double>& a, std::vector<double>& x, double theta,
                  const SamplerConfig& cfg, Rng& rng);
}  // namespace detail

}  // namespace obp
