#include "stratmc/random_instances.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace stratmc {

InstanceGenerator::InstanceGenerator(std::uint64_t seed, InstanceOptions options)
    : rng_(seed), options_(std::move(options)) {
  if (options_.dimension < 1 || options_.max_samples < options_.min_samples ||
      options_.min_samples < 1 || options_.max_values < 1 || options_.max_denominator < 2 ||
      options_.max_cells_per_axis < 1)
    throw std::invalid_argument("invalid instance options");
}

Rational InstanceGenerator::random_rational_in_unit(int max_denominator) {
  const int den = rng_.uniform_int(2, max_denominator);
  const int num = rng_.uniform_int(0, den);
  return Rational(num) / den;
}

Rational InstanceGenerator::random_value() {
  if (options_.unit_range) return random_rational_in_unit(options_.max_denominator);
  const int den = rng_.uniform_int(1, options_.max_denominator);
  const int num = rng_.uniform_int(-4 * den, 4 * den);
  return Rational(num) / den;
}

std::vector<Rational> InstanceGenerator::random_cuts() {
  const int cells = rng_.uniform_int(1, options_.max_cells_per_axis);
  const int den = rng_.uniform_int(std::max(2, cells), options_.max_denominator);
  std::set<Rational> cuts;
  while (static_cast<int>(cuts.size()) < cells - 1) {
    const int num = rng_.uniform_int(1, den - 1);
    cuts.insert(Rational(num) / den);
  }
  return {cuts.begin(), cuts.end()};
}

PiecewiseConstantFn InstanceGenerator::random_function() {
  std::vector<std::vector<Rational>> cuts;
  size_t cell_count = 1;
  for (int j = 0; j < options_.dimension; ++j) {
    cuts.push_back(random_cuts());
    cell_count *= cuts.back().size() + 1;
  }

  // A limited palette caps the number of distinct values.
  std::vector<Rational> palette;
  const int palette_size = rng_.uniform_int(1, options_.max_values);
  for (int i = 0; i < palette_size; ++i) palette.push_back(random_value());
  std::sort(palette.begin(), palette.end());
  palette.erase(std::unique(palette.begin(), palette.end()), palette.end());

  std::vector<Rational> values(cell_count);
  if (!options_.monotone_function) {
    for (auto& v : values)
      v = palette[static_cast<size_t>(
          rng_.uniform_int(0, static_cast<int>(palette.size()) - 1))];
  } else {
    // Non-decreasing along every axis: each cell takes the max over its
    // immediate predecessors, bumped up a random number of palette steps.
    std::vector<size_t> shape;
    for (const auto& c : cuts) shape.push_back(c.size() + 1);
    std::vector<size_t> stride(shape.size(), 1);
    for (size_t j = shape.size(); j-- > 1;) stride[j - 1] = stride[j] * shape[j];
    std::vector<size_t> level(cell_count, 0);
    std::vector<size_t> idx(shape.size(), 0);
    for (size_t flat = 0; flat < cell_count; ++flat) {
      size_t floor_level = 0;
      for (size_t j = 0; j < shape.size(); ++j)
        if (idx[j] > 0) floor_level = std::max(floor_level, level[flat - stride[j]]);
      const int headroom = static_cast<int>(palette.size() - 1 - floor_level);
      const int bump = headroom > 0 ? std::max(0, rng_.uniform_int(-2, std::min(1, headroom))) : 0;
      level[flat] = floor_level + static_cast<size_t>(bump);
      values[flat] = palette[level[flat]];
      size_t j = shape.size();
      while (j > 0) {
        --j;
        if (++idx[j] < shape[j]) break;
        idx[j] = 0;
      }
    }
  }
  return PiecewiseConstantFn::from_grid(cuts, std::move(values), options_.unit_range);
}

Partition InstanceGenerator::random_splits(Partition start, int count) {
  Partition current = std::move(start);
  for (int step = 0; step < count; ++step) {
    std::vector<int> splittable;
    for (int i = 0; i < current.size(); ++i)
      if (current.stratum(i).allocation >= 2) splittable.push_back(i);
    if (splittable.empty()) break;
    const int target = splittable[static_cast<size_t>(
        rng_.uniform_int(0, static_cast<int>(splittable.size()) - 1))];
    const int axis = rng_.uniform_int(0, options_.dimension - 1);
    const Stratum& s = current.stratum(target);
    const Box& box = s.region.front();
    const int k = s.allocation;
    const int left = rng_.uniform_int(1, k - 1);
    const Rational threshold =
        box.lower[static_cast<size_t>(axis)] +
        (box.upper[static_cast<size_t>(axis)] - box.lower[static_cast<size_t>(axis)]) * left / k;
    current = split_stratum(current, target, axis, threshold).partition;
  }
  return current;
}

RefinedPair InstanceGenerator::random_refined_pair() {
  const int n = rng_.uniform_int(options_.min_samples, options_.max_samples);
  const Partition root = coarsest_partition(n, BaseMeasure(options_.dimension));
  const int coarse_steps = rng_.uniform_int(0, options_.max_splits / 2);
  const int fine_steps = rng_.uniform_int(1, std::max(1, options_.max_splits - coarse_steps));
  Partition coarse = random_splits(root, coarse_steps);
  Partition fine = random_splits(coarse, fine_steps);
  RefinementWitness witness = refinement_witness(coarse, fine);
  return {std::move(coarse), std::move(fine), std::move(witness)};
}

std::vector<Rational> InstanceGenerator::random_unit_vector(int length) {
  std::vector<Rational> out(static_cast<size_t>(length));
  for (auto& v : out) v = random_rational_in_unit(options_.max_denominator);
  return out;
}

std::pair<std::vector<Rational>, std::vector<Rational>>
InstanceGenerator::random_majorization_pair(int length) {
  std::vector<Rational> q = random_unit_vector(length);
  std::vector<Rational> p = q;
  // Averaging transforms: each pulls two entries together, so the result is
  // the image of q under a doubly stochastic matrix.
  const int rounds = rng_.uniform_int(1, 2 * length);
  for (int r = 0; r < rounds && length >= 2; ++r) {
    const int i = rng_.uniform_int(0, length - 1);
    int j = rng_.uniform_int(0, length - 2);
    if (j >= i) ++j;
    const Rational lambda = random_rational_in_unit(16);
    const Rational pi = p[static_cast<size_t>(i)];
    const Rational pj = p[static_cast<size_t>(j)];
    p[static_cast<size_t>(i)] = lambda * pi + (1 - lambda) * pj;
    p[static_cast<size_t>(j)] = (1 - lambda) * pi + lambda * pj;
  }
  return {std::move(p), std::move(q)};
}

DiscreteDist InstanceGenerator::random_discrete(int max_support_size, int span) {
  const int size = rng_.uniform_int(1, max_support_size);
  std::set<Rational> support;
  while (static_cast<int>(support.size()) < size) {
    const int den = rng_.uniform_int(1, 8);
    support.insert(Rational(rng_.uniform_int(-span, span)) / den);
  }
  std::map<Rational, Rational> weights;
  int total = 0;
  std::vector<int> raw;
  for (size_t i = 0; i < support.size(); ++i) {
    raw.push_back(rng_.uniform_int(1, 16));
    total += raw.back();
  }
  size_t slot = 0;
  for (const Rational& v : support) weights[v] = Rational(raw[slot++]) / total;
  return DiscreteDist::from_weights(weights);
}

DiscreteDist InstanceGenerator::random_spread(const DiscreteDist& x, int rounds) {
  DiscreteDist current = x;
  for (int r = 0; r < rounds; ++r) {
    const int pick = rng_.uniform_int(0, static_cast<int>(current.size()) - 1);
    const Rational v = current.support()[static_cast<size_t>(pick)];
    const Rational mass = current.probs()[static_cast<size_t>(pick)];
    const Rational delta = Rational(rng_.uniform_int(1, 4)) / rng_.uniform_int(1, 4);
    std::map<Rational, Rational> weights;
    for (size_t i = 0; i < current.size(); ++i)
      if (i != static_cast<size_t>(pick))
        weights[current.support()[i]] += current.probs()[i];
    weights[v - delta] += mass / 2;
    weights[v + delta] += mass / 2;
    current = DiscreteDist::from_weights(weights);
  }
  return current;
}

}  // namespace stratmc
