#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <vector>

#include "stratmc/discrete_dist.hpp"
#include "stratmc/measure_space.hpp"
#include "stratmc/rational.hpp"

namespace stratmc {

// Step function on [0,1]^d: disjoint box cells with rational values.
// The only integrand class the exact distribution engine accepts.
class PiecewiseConstantFn {
 public:
  struct Cell {
    Box box;
    Rational value;
  };

  // Cells must tile the unit cube. With declare_unit_range set, all values
  // must lie in [0,1]; the censored estimators require that flag.
  PiecewiseConstantFn(int dimension, std::vector<Cell> cells,
                      bool declare_unit_range = false);

  static PiecewiseConstantFn constant(int dimension, const Rational& value,
                                      bool declare_unit_range = false);
  // Row-major values over the grid spanned by per-axis interior cuts; axis 0
  // is the most significant index.
  static PiecewiseConstantFn from_grid(const std::vector<std::vector<Rational>>& cuts,
                                       std::vector<Rational> values,
                                       bool declare_unit_range = false);
  // One-dimensional convenience: interior breakpoints plus a value per interval.
  static PiecewiseConstantFn step_1d(const std::vector<Rational>& cuts,
                                     std::vector<Rational> values,
                                     bool declare_unit_range = false);

  int dimension() const { return dimension_; }
  const std::vector<Cell>& cells() const { return cells_; }
  bool unit_range_declared() const { return unit_range_; }

  // Value of the unique cell owning u; boundary ownership follows the box
  // convention. Throws std::domain_error outside [0,1]^d.
  Rational eval(const std::vector<Rational>& u) const;
  double eval(const std::vector<double>& u) const;  // exact lookup, doubles are dyadic

  Rational ess_sup() const;

  friend bool operator==(const PiecewiseConstantFn& a, const PiecewiseConstantFn& b);

 private:
  int dimension_;
  std::vector<Cell> cells_;
  bool unit_range_;
};

// Law of f(V) for V distributed as the base law conditioned on the stratum.
// Exact mass ratios; requires uniform marginals and positive stratum mass.
DiscreteDist stratum_value_dist(const PiecewiseConstantFn& f, const Stratum& s,
                                const BaseMeasure& base);

Rational stratum_mean(const PiecewiseConstantFn& f, const Stratum& s,
                      const BaseMeasure& base);
Rational global_mean(const PiecewiseConstantFn& f, const BaseMeasure& base);

// True iff values are non-decreasing along every axis across adjacent cells
// of the common refinement grid.
bool is_monotone(const PiecewiseConstantFn& f);

// Black-box integrand for Monte Carlo use only. Deterministic by contract;
// the evaluation counter tracks cost and is safe under concurrent calls.
class FunctionOracle {
 public:
  using Evaluator = std::function<double(const std::vector<double>&)>;

  FunctionOracle(int dimension, Evaluator evaluator, bool unit_range = false);

  int dimension() const { return dimension_; }
  bool unit_range() const { return unit_range_; }
  double operator()(const std::vector<double>& u) const;
  long long evaluations() const { return count_.load(std::memory_order_relaxed); }

 private:
  int dimension_;
  Evaluator evaluator_;
  bool unit_range_;
  mutable std::atomic<long long> count_{0};
};

// Mean-zero observation noise attached to integral estimates.
struct NoiseSpec {
  enum class Kind { none, gaussian, two_point };

  Kind kind = Kind::none;
  // gaussian: the variance sigma^2; two_point: the magnitude c of +-c.
  Rational param = 0;

  static NoiseSpec none() { return {}; }
  static NoiseSpec gaussian(const Rational& variance);
  static NoiseSpec two_point(const Rational& magnitude);

  Rational variance() const;

  friend bool operator==(const NoiseSpec& a, const NoiseSpec& b) {
    return a.kind == b.kind && a.param == b.param;
  }
};

}  // namespace stratmc
