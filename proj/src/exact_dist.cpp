#include "stratmc/exact_dist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace stratmc {

namespace {

void require_exact_inputs(const PiecewiseConstantFn& f, const Partition& p) {
  if (f.dimension() != p.dimension())
    throw std::invalid_argument("function and partition dimensions differ");
  if (!p.base().uniform())
    throw std::invalid_argument("exact laws require uniform marginals");
}

void require_unit_range(const PiecewiseConstantFn& f) {
  if (!f.unit_range_declared())
    throw std::invalid_argument("censored estimators need f declared within [0,1]");
}

}  // namespace

DiscreteDist dist_sup(const PiecewiseConstantFn& f, const Partition& p) {
  require_exact_inputs(f, p);

  std::vector<DiscreteDist> laws;
  laws.reserve(static_cast<size_t>(p.size()));
  std::vector<Rational> candidates;
  for (int i = 0; i < p.size(); ++i) {
    laws.push_back(stratum_value_dist(f, p.stratum(i), p.base()));
    const auto& s = laws.back().support();
    candidates.insert(candidates.end(), s.begin(), s.end());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // CDF of the max at t is the product over strata of P(f <= t | B)^k.
  std::map<Rational, Rational> weights;
  Rational previous = 0;
  for (const Rational& t : candidates) {
    Rational cdf = 1;
    for (int i = 0; i < p.size(); ++i)
      cdf *= rat_pow(laws[static_cast<size_t>(i)].cdf(t),
                     static_cast<unsigned>(p.stratum(i).allocation));
    weights[t] = cdf - previous;
    previous = cdf;
  }
  return DiscreteDist::from_weights(weights);
}

Rational q_coefficient(const PiecewiseConstantFn& f, const Stratum& s,
                       const BaseMeasure& base, const Rational& t) {
  require_unit_range(f);
  if (t < 0 || t > 1) throw std::invalid_argument("threshold outside [0,1]");
  const DiscreteDist law = stratum_value_dist(f, s, base);
  Rational q = 0;
  for (size_t r = 0; r < law.size(); ++r) {
    const Rational& v = law.support()[r];
    q += law.probs()[r] * (std::min(t, v) + 1 - v);
  }
  return q;
}

CensoredSupCdf::CensoredSupCdf(std::vector<Rational> breakpoints,
                               std::vector<std::vector<std::pair<Rational, Rational>>> segments,
                               std::vector<int> exponents)
    : breakpoints_(std::move(breakpoints)),
      segments_(std::move(segments)),
      exponents_(std::move(exponents)) {
  if (breakpoints_.size() < 2 || breakpoints_.front() != 0 || breakpoints_.back() != 1)
    throw std::invalid_argument("breakpoints must run from 0 to 1");
  if (segments_.size() != exponents_.size())
    throw std::invalid_argument("one segment table per stratum required");
  for (const auto& table : segments_)
    if (table.size() != breakpoints_.size() - 1)
      throw std::invalid_argument("one segment per breakpoint gap required");
}

Rational CensoredSupCdf::stratum_coefficient(int stratum, const Rational& t) const {
  if (t < 0 || t > 1) throw std::invalid_argument("threshold outside [0,1]");
  const auto& table = segments_.at(static_cast<size_t>(stratum));
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  size_t seg = static_cast<size_t>(it - breakpoints_.begin());
  seg = (seg == 0) ? 0 : seg - 1;
  if (seg >= table.size()) seg = table.size() - 1;  // t == 1
  const auto& [intercept, slope] = table[seg];
  return intercept + slope * t;
}

Rational CensoredSupCdf::value(const Rational& t) const {
  Rational product = 1;
  for (int i = 0; i < strata_count(); ++i)
    product *= rat_pow(stratum_coefficient(i, t),
                       static_cast<unsigned>(exponents_[static_cast<size_t>(i)]));
  return product;
}

CensoredSupCdf cdf_sup_censored(const PiecewiseConstantFn& f, const Partition& p) {
  require_exact_inputs(f, p);
  require_unit_range(f);

  std::vector<DiscreteDist> laws;
  std::vector<Rational> breaks = {Rational(0), Rational(1)};
  for (int i = 0; i < p.size(); ++i) {
    laws.push_back(stratum_value_dist(f, p.stratum(i), p.base()));
    const auto& s = laws.back().support();
    breaks.insert(breaks.end(), s.begin(), s.end());
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // On [t_s, t_{s+1}] the coefficient is sum_{v <= t_s} p v + (1 - mean)
  // plus t times the mass strictly above t_s.
  std::vector<std::vector<std::pair<Rational, Rational>>> segments;
  std::vector<int> exponents;
  for (int i = 0; i < p.size(); ++i) {
    const DiscreteDist& law = laws[static_cast<size_t>(i)];
    const Rational one_minus_mean = 1 - law.mean();
    std::vector<std::pair<Rational, Rational>> table;
    table.reserve(breaks.size() - 1);
    for (size_t s = 0; s + 1 < breaks.size(); ++s) {
      Rational settled = 0;
      Rational live = 0;
      for (size_t r = 0; r < law.size(); ++r) {
        if (law.support()[r] <= breaks[s])
          settled += law.probs()[r] * law.support()[r];
        else
          live += law.probs()[r];
      }
      table.emplace_back(settled + one_minus_mean, live);
    }
    segments.push_back(std::move(table));
    exponents.push_back(p.stratum(i).allocation);
  }
  return CensoredSupCdf(std::move(breaks), std::move(segments), std::move(exponents));
}

DiscreteDist dist_integral(const PiecewiseConstantFn& f, const Partition& p,
                           std::size_t support_cap) {
  require_exact_inputs(f, p);
  DiscreteDist sum = DiscreteDist::point_mass(0);
  for (int i = 0; i < p.size(); ++i) {
    const DiscreteDist law = stratum_value_dist(f, p.stratum(i), p.base());
    sum = DiscreteDist::convolve(
        sum, DiscreteDist::iid_sum(law, p.stratum(i).allocation, support_cap), support_cap);
  }
  return sum.scaled(Rational(1) / p.total_samples());
}

DiscreteDist dist_integral_censored(const PiecewiseConstantFn& f, const Partition& p) {
  require_exact_inputs(f, p);
  require_unit_range(f);

  // Poisson-binomial count over n Bernoulli trials with the stratum mean as
  // success probability, repeated per allocated index.
  const int n = p.total_samples();
  std::vector<Rational> count(static_cast<size_t>(n) + 1, Rational(0));
  count[0] = 1;
  int trials = 0;
  for (int i = 0; i < p.size(); ++i) {
    const Rational success = stratum_mean(f, p.stratum(i), p.base());
    for (int rep = 0; rep < p.stratum(i).allocation; ++rep) {
      ++trials;
      for (int c = trials; c >= 1; --c)
        count[static_cast<size_t>(c)] =
            count[static_cast<size_t>(c)] * (1 - success) +
            count[static_cast<size_t>(c) - 1] * success;
      count[0] *= 1 - success;
    }
  }

  std::map<Rational, Rational> weights;
  for (int c = 0; c <= n; ++c)
    weights[Rational(c) / n] += count[static_cast<size_t>(c)];
  return DiscreteDist::from_weights(weights);
}

Rational variance_integral_noisy(const PiecewiseConstantFn& f, const Partition& p,
                                 const NoiseSpec& noise) {
  require_exact_inputs(f, p);
  const int n = p.total_samples();
  Rational within = 0;
  for (int i = 0; i < p.size(); ++i)
    within += Rational(p.stratum(i).allocation) / n *
              stratum_value_dist(f, p.stratum(i), p.base()).variance();
  return (within + noise.variance()) / n;
}

Rational lp_loss(const DiscreteDist& dist, const Rational& center, unsigned power) {
  if (power < 1) throw std::invalid_argument("power must be at least 1");
  Rational total = 0;
  for (size_t i = 0; i < dist.size(); ++i) {
    Rational gap = dist.support()[i] - center;
    if (gap < 0) gap = -gap;
    total += rat_pow(gap, power) * dist.probs()[i];
  }
  return total;
}

double lp_loss_real(const DiscreteDist& dist, const Rational& center, double power) {
  if (power < 1) throw std::invalid_argument("power must be at least 1");
  double total = 0;
  for (size_t i = 0; i < dist.size(); ++i)
    total += std::pow(std::abs(to_double(dist.support()[i] - center)), power) *
             to_double(dist.probs()[i]);
  return total;
}

}  // namespace stratmc
