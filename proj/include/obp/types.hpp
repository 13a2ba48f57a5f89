#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace obp {

// Thrown when an input lies outside the support of a density (broken
// interlacing, coincident points, non-probability weights, ...).
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a method's validity condition fails (e.g. the vertical-line
// contour with N*theta <= 1), as opposed to a bad input object.
class precondition_error : public std::runtime_error {
 public:
  explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Inverse-temperature-like parameter; beta = 2*theta. Strictly positive and
// finite. theta = 0 is only meaningful for the dedicated permutation-sum
// Bessel formula, which takes a raw double instead of this type.
struct Theta {
  explicit Theta(double v) : value(v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw domain_error("theta must be positive and finite, got " + std::to_string(v));
    }
  }
  double value;
};

enum class Ordering { strict, weak };

// How density evaluators treat inputs on the boundary (ties / broken strict
// inequalities): throw a domain_error or return -infinity.
enum class BoundaryPolicy { raise, neg_inf };

// A finite real tuple sorted in decreasing order. `strict` mode corresponds
// to membership in P_N, `weak` mode to the Weyl chamber W_m.
class OrderedTuple {
 public:
  OrderedTuple() = default;

  static OrderedTuple strict(std::vector<double> v) {
    return OrderedTuple(std::move(v), Ordering::strict, 0.0);
  }
  static OrderedTuple weak(std::vector<double> v) {
    return OrderedTuple(std::move(v), Ordering::weak, 0.0);
  }
  // For data deserialized from files: each gap may undershoot zero by up to
  // rel_tol * scale before the tuple is rejected.
  static OrderedTuple strict_from_file(std::vector<double> v, double rel_tol = 1e-12) {
    return OrderedTuple(std::move(v), Ordering::strict, rel_tol);
  }
  static OrderedTuple weak_from_file(std::vector<double> v, double rel_tol = 1e-12) {
    return OrderedTuple(std::move(v), Ordering::weak, rel_tol);
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  Ordering ordering() const { return ordering_; }

  // |a| = sum of entries.
  double sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
  }

  double scale() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  OrderedTuple(std::vector<double> v, Ordering ord, double rel_tol)
      : values_(std::move(v)), ordering_(ord) {
    if (values_.empty()) throw domain_error("ordered tuple must have length >= 1");
    double sc = scale();
    double slack = rel_tol * std::max(sc, 1.0);
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) throw domain_error("ordered tuple entries must be finite");
      if (i + 1 < values_.size()) {
        double gap = values_[i] - values_[i + 1];
        bool ok = (ordering_ == Ordering::strict) ? (gap > -slack && (rel_tol > 0.0 || gap > 0.0))
                                                  : (gap >= -slack);
        if (!ok) {
          throw domain_error("ordering violation at index " + std::to_string(i) +
                             ": " + std::to_string(values_[i]) + " vs " +
                             std::to_string(values_[i + 1]));
        }
      }
    }
  }

  std::vector<double> values_;
  Ordering ordering_ = Ordering::strict;
};

// Levels 1..m of a Rayleigh triangle; level k holds exactly k reals and
// consecutive levels interlace strictly. An optional top tuple provides
// conditioning context and must interlace level m the same way.
class InterlacingArray {
 public:
  InterlacingArray() = default;

  InterlacingArray(std::vector<std::vector<double>> levels,
                   std::optional<std::vector<double>> top = std::nullopt,
                   double rel_tol = 0.0) {
    if (levels.empty()) throw domain_error("interlacing array needs at least one level");
    levels_ = std::move(levels);
    for (std::size_t k = 0; k < levels_.size(); ++k) {
      if (levels_[k].size() != k + 1) {
        throw domain_error("level " + std::to_string(k + 1) + " must hold " +
                           std::to_string(k + 1) + " entries");
      }
    }
    if (top) {
      if (top->size() < levels_.size() + 1) {
        throw domain_error("top tuple must be longer than the deepest level");
      }
      top_ = std::move(*top);
    }
    validate(rel_tol);
  }

  static InterlacingArray from_file(std::vector<std::vector<double>> levels,
                                    std::optional<std::vector<double>> top,
                                    double rel_tol = 1e-12) {
    return InterlacingArray(std::move(levels), std::move(top), rel_tol);
  }

  std::size_t depth() const { return levels_.size(); }
  // 1-based level access, matching the k-th level of the triangle.
  const std::vector<double>& level(std::size_t k) const { return levels_.at(k - 1); }
  const std::vector<std::vector<double>>& levels() const { return levels_; }
  bool has_top() const { return top_.has_value(); }
  const std::vector<double>& top() const { return *top_; }

  double level_sum(std::size_t k) const {
    double s = 0.0;
    for (double v : level(k)) s += v;
    return s;
  }

  double scale() const {
    double m = 0.0;
    for (const auto& lv : levels_)
      for (double v : lv) m = std::max(m, std::abs(v));
    if (top_)
      for (double v : *top_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  void validate(double rel_tol) const {
    double slack = rel_tol * std::max(scale(), 1.0);
    auto check_pair = [&](const std::vector<double>& lower, const std::vector<double>& upper) {
      // upper[i] > lower[i] > upper[i+1]
      for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!(upper[i] - lower[i] > -slack) || !(lower[i] - upper[i + 1] > -slack) ||
            (rel_tol == 0.0 && !(upper[i] > lower[i] && lower[i] > upper[i + 1]))) {
          throw domain_error("interlacing violation at position " + std::to_string(i));
        }
      }
    };
    for (std::size_t k = 0; k + 1 < levels_.size(); ++k) check_pair(levels_[k], levels_[k + 1]);
    if (top_) check_pair(levels_.back(), *top_);
    for (const auto& lv : levels_)
      for (double v : lv)
        if (!std::isfinite(v)) throw domain_error("interlacing entries must be finite");
  }

  std::vector<std::vector<double>> levels_;
  std::optional<std::vector<double>> top_;
};

// Compactly supported probability measure given by weighted atoms.
struct EmpiricalMeasure {
  struct Atom {
    double x;
    double w;
  };

  EmpiricalMeasure() = default;
  EmpiricalMeasure(std::vector<Atom> atoms_in, double support_bound_in)
      : atoms(std::move(atoms_in)), support_bound(support_bound_in) {
    if (!(support_bound > 0.0)) throw domain_error("support bound must be positive");
    double total = 0.0;
    for (const auto& a : atoms) {
      if (!(a.w > 0.0)) throw domain_error("atom weights must be positive");
      if (std::abs(a.x) > support_bound * (1.0 + 1e-12)) {
        throw domain_error("atom outside declared support interval");
      }
      total += a.w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw domain_error("atom weights must sum to 1 (got " + std::to_string(total) + ")");
    }
  }

  // Empirical measure mu_N of a(N): atoms a_i/N with weight 1/N each.
  static EmpiricalMeasure from_tuple(const OrderedTuple& a, std::size_t n_scale) {
    std::vector<Atom> atoms;
    atoms.reserve(a.size());
    double w = 1.0 / static_cast<double>(a.size());
    double bound = 0.0;
    for (double v : a.values()) {
      double x = v / static_cast<double>(n_scale);
      atoms.push_back({x, w});
      bound = std::max(bound, std::abs(x));
    }
    EmpiricalMeasure mu;
    mu.atoms = std::move(atoms);
    mu.support_bound = std::max(bound, 1e-300);
    return mu;
  }

  double mean() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.w * a.x;
    return s;
  }
  double moment(int k) const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.w * std::pow(a.x, k);
    return s;
  }
  double variance() const {
    double m = mean();
    double s = 0.0;
    for (const auto& a : atoms) s += a.w * (a.x - m) * (a.x - m);
    return s;
  }
  double support_max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) m = std::max(m, a.x);
    return m;
  }
  double support_min() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) m = std::min(m, a.x);
    return m;
  }

  std::vector<Atom> atoms;
  double support_bound = 1.0;
};

// Monte Carlo value with standard error (sample sd of the per-draw values
// over sqrt(n)) and draw count.
struct MCEstimate {
  std::complex<double> mean{0.0, 0.0};
  double stderror = 0.0;
  std::size_t n = 0;

  double real() const { return mean.real(); }
};

}  // namespace obp
