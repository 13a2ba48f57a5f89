#pragma once

#include <cmath>
#include <cstdint>

namespace obp {

// Counter-based 64-bit generator (SplitMix64 finalizer over key + counter).
// Streams are split by hashing a stream id into a fresh key, so the draws of
// one chain never depend on how many sibling chains exist.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ull)) {}

  Rng split(std::uint64_t stream) const {
    Rng child(0);
    child.key_ = mix(key_ ^ mix(stream + 0x9e3779b97f4a7c15ull));
    child.ctr_ = 0;
    return child;
  }

  std::uint64_t next_u64() { return mix(key_ + (++ctr_) * 0x9e3779b97f4a7c15ull); }

  // Uniform in the open interval (0, 1); never returns 0 or 1 so logs and
  // inverse CDFs are safe.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // One standard normal draw (Box-Muller, cosine branch).
  double gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Gamma(alpha, 1) via Marsaglia-Tsang, with the standard boost for alpha < 1
  // and exponential-sum shortcuts for the small integer orders.
  double gamma(double alpha) {
    if (alpha == 1.0) return -std::log(uniform());
    if (alpha == 2.0) return -std::log(uniform() * uniform());
    if (alpha < 1.0) {
      double u = uniform();
      return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    double d = alpha - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = gaussian();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    double x = gamma(a);
    double y = gamma(b);
    return x / (x + y);
  }

  // Beta(alpha, alpha) with closed-form fast paths for the common orders.
  double beta_symmetric(double alpha) {
    if (alpha == 1.0) return uniform();
    if (alpha == 0.5) {  // arcsine law
      double s = std::sin(1.5707963267948966 * uniform());
      return s * s;
    }
    if (alpha == 2.0) {  // Gamma(2) = sum of two exponentials
      double g1 = -std::log(uniform() * uniform());
      double g2 = -std::log(uniform() * uniform());
      return g1 / (g1 + g2);
    }
    return beta(alpha, alpha);
  }

  double chi(double k) { return std::sqrt(2.0 * gamma(0.5 * k)); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
};

}  // namespace obp
