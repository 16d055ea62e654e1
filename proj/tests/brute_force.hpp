// Test-only enumeration oracle: exact estimator laws computed by walking the
// full joint outcome grid of all draws. Deliberately independent of the
// product/convolution formulas in the library; cell masses come straight from
// box intersections here.
#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "stratmc/discrete_dist.hpp"
#include "stratmc/function_model.hpp"
#include "stratmc/measure_space.hpp"
#include "stratmc/rational.hpp"

namespace bruteforce {

using stratmc::Box;
using stratmc::DiscreteDist;
using stratmc::Partition;
using stratmc::PiecewiseConstantFn;
using stratmc::Rational;

using ValueLaw = std::vector<std::pair<Rational, Rational>>;  // (value, prob)

inline ValueLaw draw_value_law(const PiecewiseConstantFn& f, const stratmc::Stratum& s) {
  std::map<Rational, Rational> weights;
  Rational mass = 0;
  for (const Box& b : s.region) mass += b.volume();
  for (const auto& cell : f.cells()) {
    Rational overlap = 0;
    for (const Box& b : s.region)
      if (auto inter = Box::intersect(cell.box, b)) overlap += inter->volume();
    if (overlap != 0) weights[cell.value] += overlap / mass;
  }
  return {weights.begin(), weights.end()};
}

// One value law per draw, strata repeated by allocation.
inline std::vector<ValueLaw> per_draw_laws(const PiecewiseConstantFn& f, const Partition& p) {
  std::vector<ValueLaw> laws;
  for (int i = 0; i < p.size(); ++i) {
    const ValueLaw law = draw_value_law(f, p.stratum(i));
    for (int rep = 0; rep < p.stratum(i).allocation; ++rep) laws.push_back(law);
  }
  return laws;
}

template <typename Visit>
void enumerate_assignments(const std::vector<ValueLaw>& laws, size_t next,
                           std::vector<Rational>& values, const Rational& prob,
                           Visit&& visit) {
  if (next == laws.size()) {
    visit(values, prob);
    return;
  }
  for (const auto& [v, q] : laws[next]) {
    values.push_back(v);
    enumerate_assignments(laws, next + 1, values, prob * q, visit);
    values.pop_back();
  }
}

inline DiscreteDist dist_sup_oracle(const PiecewiseConstantFn& f, const Partition& p) {
  std::map<Rational, Rational> weights;
  auto laws = per_draw_laws(f, p);
  std::vector<Rational> values;
  enumerate_assignments(laws, 0, values, Rational(1),
                        [&](const std::vector<Rational>& vs, const Rational& prob) {
                          Rational best = vs.front();
                          for (const Rational& v : vs) best = std::max(best, v);
                          weights[best] += prob;
                        });
  return DiscreteDist::from_weights(weights);
}

inline DiscreteDist dist_integral_oracle(const PiecewiseConstantFn& f, const Partition& p) {
  std::map<Rational, Rational> weights;
  auto laws = per_draw_laws(f, p);
  std::vector<Rational> values;
  enumerate_assignments(laws, 0, values, Rational(1),
                        [&](const std::vector<Rational>& vs, const Rational& prob) {
                          Rational sum = 0;
                          for (const Rational& v : vs) sum += v;
                          weights[sum / p.total_samples()] += prob;
                        });
  return DiscreteDist::from_weights(weights);
}

// Indicator outcomes enumerated on top of the value assignment; a draw at
// value v accepts its uniform threshold with probability v.
inline DiscreteDist dist_integral_censored_oracle(const PiecewiseConstantFn& f,
                                                  const Partition& p) {
  if (!f.unit_range_declared())
    throw std::invalid_argument("censored oracle needs f within [0,1]");
  const int n = p.total_samples();
  std::map<Rational, Rational> weights;
  auto laws = per_draw_laws(f, p);
  std::vector<Rational> values;
  enumerate_assignments(
      laws, 0, values, Rational(1),
      [&](const std::vector<Rational>& vs, const Rational& prob) {
        std::vector<Rational> count(vs.size() + 1, Rational(0));
        count[0] = 1;
        size_t trials = 0;
        for (const Rational& v : vs) {
          ++trials;
          for (size_t c = trials; c >= 1; --c)
            count[c] = count[c] * (1 - v) + count[c - 1] * v;
          count[0] *= 1 - v;
        }
        for (size_t c = 0; c < count.size(); ++c)
          weights[Rational(static_cast<long>(c)) / n] += prob * count[c];
      });
  return DiscreteDist::from_weights(weights);
}

// P(censored sup <= t): conditionally on the values, each draw independently
// contributes (t /\ v) + (1 - v).
inline Rational censored_sup_cdf_oracle(const PiecewiseConstantFn& f, const Partition& p,
                                        const Rational& t) {
  if (!f.unit_range_declared())
    throw std::invalid_argument("censored oracle needs f within [0,1]");
  Rational total = 0;
  auto laws = per_draw_laws(f, p);
  std::vector<Rational> values;
  enumerate_assignments(laws, 0, values, Rational(1),
                        [&](const std::vector<Rational>& vs, const Rational& prob) {
                          Rational factor = 1;
                          for (const Rational& v : vs)
                            factor *= std::min(t, v) + 1 - v;
                          total += prob * factor;
                        });
  return total;
}

}  // namespace bruteforce
