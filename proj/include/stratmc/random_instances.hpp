#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "stratmc/discrete_dist.hpp"
#include "stratmc/function_model.hpp"
#include "stratmc/measure_space.hpp"
#include "stratmc/rng.hpp"

namespace stratmc {

// Bounds for randomly generated theorem-sweep instances. Denominators stay
// small so exact convolutions stay small.
struct InstanceOptions {
  int dimension = 1;
  int min_samples = 2;
  int max_samples = 6;
  int max_values = 5;
  int max_denominator = 64;
  int max_cells_per_axis = 8;
  int max_splits = 6;
  bool unit_range = false;
  bool monotone_function = false;
};

struct RefinedPair {
  Partition coarse;
  Partition fine;
  RefinementWitness witness;
};

class InstanceGenerator {
 public:
  InstanceGenerator(std::uint64_t seed, InstanceOptions options);

  const InstanceOptions& options() const { return options_; }

  // Random grid-aligned step function within the configured bounds.
  PiecewiseConstantFn random_function();

  // Sample size, then coarse = coarsest after a split prefix and fine = more
  // splits of coarse. Axis-threshold splits only, so strata are boxes and
  // one-dimensional partitions stay monotone.
  RefinedPair random_refined_pair();

  // Entrywise in [0,1] with bounded denominators.
  std::vector<Rational> random_unit_vector(int length);

  // (p, q) with p majorized by q, built from q by random averaging transforms.
  std::pair<std::vector<Rational>, std::vector<Rational>> random_majorization_pair(int length);

  DiscreteDist random_discrete(int max_support_size, int span = 8);

  // Mean-preserving spread of x: dominates x in the convex order.
  DiscreteDist random_spread(const DiscreteDist& x, int rounds);

  Rational random_rational_in_unit(int max_denominator);
  int uniform_int(int lo, int hi) { return rng_.uniform_int(lo, hi); }

 private:
  Rational random_value();
  std::vector<Rational> random_cuts();
  Partition random_splits(Partition start, int count);

  SequentialRng rng_;
  InstanceOptions options_;
};

}  // namespace stratmc
