#include "obp/densities.hpp"

#include <cmath>
#include <limits>

namespace obp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

[[noreturn]] void boundary_throw(const char* what) { throw domain_error(what); }

// Sum of log-gaps over i<j; returns -inf through `ok=false` if a gap is not
// strictly positive.
double log_vandermonde(const std::vector<double>& v, bool& ok) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      double gap = v[i] - v[j];
      if (!(gap > 0.0)) {
        ok = false;
        return 0.0;
      }
      s += std::log(gap);
    }
  }
  return s;
}

// Sum over all cross pairs of log|u_s - l_r|, assuming interlacing so every
// factor is nonzero; flags ok=false on a tie.
double log_cross(const std::vector<double>& upper, const std::vector<double>& lower, bool& ok) {
  double s = 0.0;
  for (double u : upper) {
    for (double l : lower) {
      double d = std::abs(u - l);
      if (!(d > 0.0)) {
        ok = false;
        return 0.0;
      }
      s += std::log(d);
    }
  }
  return s;
}

bool interlaces_strictly(const std::vector<double>& lower, const std::vector<double>& upper) {
  if (upper.size() != lower.size() + 1) return false;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(upper[i] > lower[i]) || !(lower[i] > upper[i + 1])) return false;
  }
  return true;
}

double handle_boundary(BoundaryPolicy policy, const char* what) {
  if (policy == BoundaryPolicy::raise) boundary_throw(what);
  return kNegInf;
}

// Unnormalized log weight of the stack level_1 .. level_n with level_{n+1}
// given: the interior Vandermonde^{2-2theta} and cross |.|^{theta-1} factors.
double log_stack_weight(const std::vector<std::vector<double>>& levels,
                        const std::vector<double>& top, double theta,
                        BoundaryPolicy policy, bool& failed) {
  double s = 0.0;
  bool ok = true;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const std::vector<double>& cur = levels[k];
    const std::vector<double>& up = (k + 1 < levels.size()) ? levels[k + 1] : top;
    if (!interlaces_strictly(cur, up)) {
      failed = true;
      s = handle_boundary(policy, "broken interlacing in triangle");
      return s;
    }
    if (cur.size() > 1) s += (2.0 - 2.0 * theta) * log_vandermonde(cur, ok);
    s += (theta - 1.0) * log_cross(up, cur, ok);
    if (!ok) {
      failed = true;
      s = handle_boundary(policy, "coincident points in triangle");
      return s;
    }
  }
  failed = false;
  return s;
}

}  // namespace

double log_orbital_normalization(const OrderedTuple& a, Theta theta) {
  const std::size_t n = a.size();
  const double th = theta.value;
  double tiny = 1e-13 * std::max(a.scale(), 1.0);
  double log_gaps = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double gap = a[i] - a[j];
      if (!(gap > tiny)) {
        throw domain_error("degenerate label tuple: gap below 1e-13 * scale");
      }
      log_gaps += std::log(gap);
    }
  }
  double log_const = 0.5 * static_cast<double>(n) * static_cast<double>(n + 1) * std::lgamma(th);
  for (std::size_t k = 1; k <= n; ++k) log_const -= std::lgamma(static_cast<double>(k) * th);
  return log_const + (2.0 * th - 1.0) * log_gaps;
}

double log_orbital_density(const InterlacingArray& triangle, Theta theta, BoundaryPolicy policy) {
  if (!triangle.has_top()) {
    throw domain_error("orbital density needs the top level attached to the triangle");
  }
  const std::vector<double>& top = triangle.top();
  if (triangle.depth() + 1 != top.size()) {
    throw domain_error("orbital density needs a full-depth triangle (depth N-1 under top N)");
  }
  bool failed = false;
  double w = log_stack_weight(triangle.levels(), top, theta.value, policy, failed);
  if (failed) return w;
  OrderedTuple a = OrderedTuple::strict(top);
  return w - log_orbital_normalization(a, theta);
}

double log_gbe_normalization(std::size_t m, Theta theta) {
  const double th = theta.value;
  const double md = static_cast<double>(m);
  double s = -std::lgamma(md + 1.0);
  s += 0.5 * md * std::log(2.0 * 3.14159265358979323846264338328);
  s -= (0.5 * md + 0.5 * th * md * (md - 1.0)) * std::log(th);
  for (std::size_t j = 1; j <= m; ++j) {
    s += std::lgamma(1.0 + static_cast<double>(j) * th) - std::lgamma(1.0 + th);
  }
  return s;
}

double log_gbe_density(const OrderedTuple& x, Theta theta) {
  const double th = theta.value;
  const std::vector<double>& v = x.values();
  double quad = 0.0;
  for (double t : v) quad += t * t;
  bool ok = true;
  double lv = log_vandermonde(v, ok);
  if (!ok) return kNegInf;  // vanishing |x_i - x_j|^{2 theta} factor
  return 2.0 * th * lv - 0.5 * th * quad - log_gbe_normalization(v.size(), theta);
}

double log_gbe_corners_normalization(std::size_t m, Theta theta) {
  const double th = theta.value;
  double s = 0.5 * static_cast<double>(m) * static_cast<double>(m + 1) * std::lgamma(th);
  for (std::size_t k = 1; k <= m; ++k) s -= std::lgamma(static_cast<double>(k) * th);
  return s + log_gbe_normalization(m, theta);
}

double log_gbe_corners_density(const InterlacingArray& triangle, Theta theta,
                               BoundaryPolicy policy) {
  const double th = theta.value;
  const std::size_t m = triangle.depth();
  const std::vector<double>& top = triangle.level(m);
  double quad = 0.0;
  for (double t : top) quad += t * t;
  bool ok = true;
  double s = log_vandermonde(top, ok) - 0.5 * th * quad;
  if (!ok) return handle_boundary(policy, "coincident top-level points");
  if (m > 1) {
    std::vector<std::vector<double>> lower(triangle.levels().begin(),
                                           triangle.levels().end() - 1);
    bool failed = false;
    double w = log_stack_weight(lower, top, th, policy, failed);
    if (failed) return w;
    s += w;
  }
  return s - log_gbe_corners_normalization(m, theta);
}

double log_theta_gibbs_conditional(const InterlacingArray& lower_levels,
                                   const OrderedTuple& given, Theta theta,
                                   BoundaryPolicy policy) {
  const double th = theta.value;
  const std::size_t n = lower_levels.depth();
  if (given.size() != n + 1) {
    throw domain_error("conditioning level must have length n+1");
  }
  bool ok = true;
  double given_gaps = log_vandermonde(given.values(), ok);
  if (!ok) return handle_boundary(policy, "coincident points in conditioning level");
  double s = (1.0 - 2.0 * th) * given_gaps;
  for (std::size_t k = 1; k <= n + 1; ++k) s += std::lgamma(static_cast<double>(k) * th);
  s -= 0.5 * static_cast<double>(n + 1) * static_cast<double>(n + 2) * std::lgamma(th);
  bool failed = false;
  double w = log_stack_weight(lower_levels.levels(), given.values(), th, policy, failed);
  if (failed) return w;
  return s + w;
}

double log_corner_kernel(const OrderedTuple& a, const OrderedTuple& x, Theta theta,
                         BoundaryPolicy policy) {
  const double th = theta.value;
  const std::size_t n = x.size();
  if (a.size() != n + 1) throw domain_error("corner kernel needs |a| = |x| + 1");
  if (!interlaces_strictly(x.values(), a.values())) {
    return handle_boundary(policy, "x does not interlace a");
  }
  bool ok = true;
  double s = std::lgamma(static_cast<double>(n + 1) * th) - static_cast<double>(n + 1) * std::lgamma(th);
  s += (1.0 - 2.0 * th) * log_vandermonde(a.values(), ok);
  if (n > 1) s += log_vandermonde(x.values(), ok);
  s += (th - 1.0) * log_cross(a.values(), x.values(), ok);
  if (!ok) return handle_boundary(policy, "coincident points between levels");
  return s;
}

}  // namespace obp
