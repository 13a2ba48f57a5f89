#include "obp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace obp::stats {

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double l2 = lambda * lambda;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * l2);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  while (i < x.size() && j < y.size()) {
    double xi = x[i], yj = y[j];
    if (xi <= yj) ++i;
    if (yj <= xi) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  double ne = std::sqrt(nx * ny / (nx + ny));
  double p = kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
  return {d, p};
}

KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(x.begin(), x.end());
  double d = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double f = cdf(x[i]);
    d = std::max(d, std::max((i + 1.0) / n - f, f - i / n));
  }
  double sn = std::sqrt(n);
  double p = kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
  return {d, p};
}

namespace {

double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double beta_cdf(double x, double a, double b) { return regularized_incomplete_beta(a, b, x); }

double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * 1.4142135623730950488016887242097));
}

MCEstimate mc_estimate(std::span<const std::complex<double>> draws) {
  MCEstimate est;
  est.n = draws.size();
  if (draws.empty()) return est;
  std::complex<double> mean{0.0, 0.0};
  for (const auto& v : draws) mean += v;
  mean /= static_cast<double>(draws.size());
  double ss = 0.0;
  for (const auto& v : draws) ss += std::norm(v - mean);
  est.mean = mean;
  if (draws.size() > 1) {
    double var = ss / static_cast<double>(draws.size() - 1);
    est.stderror = std::sqrt(var / static_cast<double>(draws.size()));
  }
  return est;
}

MCEstimate mc_estimate_real(std::span<const double> draws) {
  std::vector<std::complex<double>> c(draws.begin(), draws.end());
  return mc_estimate(c);
}

MCEstimate merge_inverse_variance(std::span<const MCEstimate> parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts[0];
  bool zero_se = false;
  for (const auto& p : parts) {
    if (!(p.stderror > 0.0)) zero_se = true;
  }
  MCEstimate out;
  if (zero_se) {
    std::complex<double> m{0.0, 0.0};
    std::size_t n = 0;
    for (const auto& p : parts) {
      m += static_cast<double>(p.n) * p.mean;
      n += p.n;
    }
    out.mean = m / static_cast<double>(n);
    out.n = n;
    out.stderror = 0.0;
    return out;
  }
  double wsum = 0.0;
  std::complex<double> m{0.0, 0.0};
  std::size_t n = 0;
  for (const auto& p : parts) {
    double w = 1.0 / (p.stderror * p.stderror);
    wsum += w;
    m += w * p.mean;
    n += p.n;
  }
  out.mean = m / wsum;
  out.stderror = std::sqrt(1.0 / wsum);
  out.n = n;
  return out;
}

MCEstimate sample_moment(std::span<const double> xs, int k) {
  std::vector<double> pw(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) pw[i] = std::pow(xs[i], k);
  return mc_estimate_real(pw);
}

}  // namespace obp::stats
