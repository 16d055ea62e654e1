#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "stratmc/discrete_dist.hpp"
#include "stratmc/estimators.hpp"
#include "stratmc/exact_dist.hpp"
#include "stratmc/rational.hpp"

namespace stratmc {

// True iff y is majorized by x: partial sums of the decreasing rearrangement
// of y never exceed those of x and the totals agree exactly.
bool majorizes(const std::vector<Rational>& x, const std::vector<Rational>& y);

// True iff lo <=_st hi, decided by exact CDF comparison on the support union.
bool dominates_st(const DiscreteDist& lo, const DiscreteDist& hi);

// Censored-supremum CDFs: checks CDF_lo >= CDF_hi at every breakpoint and at
// grid_per_segment rational interior points per segment. A falsification net
// over the product-form CDFs, not a symbolic decision procedure.
bool dominates_st_cdf(const CensoredSupCdf& lo, const CensoredSupCdf& hi,
                      int grid_per_segment = 64);

struct OrderVerdict {
  bool holds = false;
  std::optional<Rational> witness;  // a t where the required inequality fails

  explicit operator bool() const { return holds; }
};

// lo <=_cx hi: exact mean equality plus stop-loss dominance at all support
// points of either law, which decides the order for finite supports.
OrderVerdict dominates_cx(const DiscreteDist& lo, const DiscreteDist& hi);

// lo <=_icx hi: stop-loss dominance plus mean(lo) <= mean(hi).
OrderVerdict dominates_icx(const DiscreteDist& lo, const DiscreteDist& hi);

// Probability mass on a finite d-dimensional grid of cells.
class GridDensity {
 public:
  GridDensity(std::vector<int> shape, std::vector<Rational> weights,
              bool normalized = true);

  int dimension() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  std::size_t cell_count() const { return weights_.size(); }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& at_flat(std::size_t flat) const { return weights_[flat]; }
  const Rational& at(const std::vector<int>& index) const;
  std::size_t flatten(const std::vector<int>& index) const;
  std::vector<int> unflatten(std::size_t flat) const;
  Rational total() const;
  bool normalized() const { return normalized_; }

 private:
  std::vector<int> shape_;
  std::vector<Rational> weights_;
  bool normalized_;
};

// Exhaustive pairwise total-positivity check; d <= 3 and side <= 16.
bool is_mtp2(const GridDensity& g);

// For p majorized by q (entries in [0,1]) builds both exact Poisson-binomial
// mean laws and returns whether the q-law is convex-dominated by the p-law.
// Throws std::invalid_argument when p is not majorized by q.
bool karlin_novikoff_check(const std::vector<Rational>& p,
                           const std::vector<Rational>& q, int n);

struct BlockLaw {
  DiscreteDist law;
  int size = 1;
};

// Fine blocks merged by the grouping: coarse blocks get the size-weighted
// mixture law, and the check is that the coarse max is stochastically below
// the fine max, via the exact product-CDF comparison at all support points.
bool mixture_max_check(const std::vector<BlockLaw>& blocks,
                       const std::vector<std::vector<int>>& grouping);

// Tests L(U | G^c) <=_st L(U | G) for an upper (increasing) cell set G by
// exhaustive enumeration of increasing sets; grids of at most 12 cells.
bool conditional_split_st(const GridDensity& g, const std::vector<bool>& upper_set);

// Evaluable CDF handle for empirical comparisons.
struct CdfView {
  std::function<double(double)> at;        // F(t)
  std::function<double(double)> at_left;   // F(t-)
  std::vector<double> breakpoints;         // candidate extremum locations
};

CdfView cdf_view(const DiscreteDist& dist);
CdfView cdf_view(const CensoredSupCdf& cdf);

struct DkwResult {
  double sup_discrepancy = 0;
  double band = 0;
  bool pass = false;
};

// Pass iff the exact sup distance between the empirical CDF of the values
// and the reference CDF is within sqrt(ln(2/alpha) / (2R)). Requires R >= 30.
DkwResult dkw_validate(const std::vector<double>& values, const CdfView& exact,
                       double alpha);
DkwResult dkw_validate(const Replication& rep, const CdfView& exact, double alpha);

}  // namespace stratmc
