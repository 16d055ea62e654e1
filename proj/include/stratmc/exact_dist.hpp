#pragma once

#include <vector>

#include "stratmc/discrete_dist.hpp"
#include "stratmc/function_model.hpp"
#include "stratmc/measure_space.hpp"

namespace stratmc {

// Exact law of the stratified supremum estimate: the CDF at t is the product
// over strata of P(f <= t | stratum)^k.
DiscreteDist dist_sup(const PiecewiseConstantFn& f, const Partition& p);

// Per-stratum coefficient of the censored-supremum CDF:
// q(t) = E[(t /\ f) + (1 - f) | stratum], exact. Requires f flagged in [0,1]
// and t in [0,1].
Rational q_coefficient(const PiecewiseConstantFn& f, const Stratum& s,
                       const BaseMeasure& base, const Rational& t);

// Exact CDF of the censored supremum estimate on [0,1]: a product of
// per-stratum piecewise-linear coefficients raised to the allocation counts,
// with an atom at zero. Evaluable at any rational t.
class CensoredSupCdf {
 public:
  CensoredSupCdf(std::vector<Rational> breakpoints,
                 std::vector<std::vector<std::pair<Rational, Rational>>> segments,
                 std::vector<int> exponents);

  // Distinct f values in [0,1] together with 0 and 1.
  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  int strata_count() const { return static_cast<int>(exponents_.size()); }
  const std::vector<int>& exponents() const { return exponents_; }

  Rational value(const Rational& t) const;            // CDF(t), t in [0,1]
  Rational atom_at_zero() const { return value(0); }
  Rational stratum_coefficient(int stratum, const Rational& t) const;

 private:
  // Segment s covers [breakpoints_[s], breakpoints_[s+1]]; the coefficient
  // there is intercept + slope * t.
  std::vector<Rational> breakpoints_;
  std::vector<std::vector<std::pair<Rational, Rational>>> segments_;  // [stratum][segment]
  std::vector<int> exponents_;
};

CensoredSupCdf cdf_sup_censored(const PiecewiseConstantFn& f, const Partition& p);

// Exact law of the stratified integral estimate (noiseless) by convolution
// of per-stratum value laws. The support cap guards convolution blowup.
DiscreteDist dist_integral(const PiecewiseConstantFn& f, const Partition& p,
                           std::size_t support_cap = kDefaultSupportCap);

// Exact law of the censored integral estimate: 1/n times a Poisson-binomial
// count with k_i trials at the stratum mean of f.
DiscreteDist dist_integral_censored(const PiecewiseConstantFn& f, const Partition& p);

// Exact variance of the noisy integral estimate via the conditional variance
// decomposition: (1/n) * (sum_i (k_i/n) Var[f | stratum_i] + sigma^2).
Rational variance_integral_noisy(const PiecewiseConstantFn& f, const Partition& p,
                                 const NoiseSpec& noise);

// E |X - center|^p, exact for integer p >= 1.
Rational lp_loss(const DiscreteDist& dist, const Rational& center, unsigned power);
double lp_loss_real(const DiscreteDist& dist, const Rational& center, double power);

}  // namespace stratmc
