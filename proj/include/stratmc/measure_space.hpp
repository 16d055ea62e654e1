#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stratmc/rational.hpp"

namespace stratmc {

// Monotone piecewise-linear map [0,1] -> [0,1] given by control points
// running from (0,0) to (1,1). Empty means identity. Applied per axis after
// uniform sampling inside a box, so it changes the sampled law without
// touching stratum masses.
struct QuantileTransform {
  std::vector<std::pair<Rational, Rational>> points;

  bool identity() const { return points.empty(); }
  double apply(double u) const;
};

// Product law on [0,1]^d: uniform on the unit cube pushed through the
// per-axis quantile transforms. Strata live in the pre-transform cube, so
// the mass of a box is its volume for every choice of marginals.
class BaseMeasure {
 public:
  explicit BaseMeasure(int dimension);
  BaseMeasure(int dimension, std::vector<QuantileTransform> marginals);

  int dimension() const { return dimension_; }
  bool uniform() const;
  const std::vector<QuantileTransform>& marginals() const { return marginals_; }

  friend bool operator==(const BaseMeasure&, const BaseMeasure&);

 private:
  int dimension_;
  std::vector<QuantileTransform> marginals_;
};

// Axis-aligned box with rational corners inside [0,1]^d. Boundary ownership
// is lower-open/upper-closed on each axis, except that a zero lower bound is
// closed; grids of such boxes tile the cube with no gaps or double coverage.
struct Box {
  std::vector<Rational> lower;
  std::vector<Rational> upper;

  Box(std::vector<Rational> lo, std::vector<Rational> hi);
  static Box unit_cube(int dimension);

  int dimension() const { return static_cast<int>(lower.size()); }
  Rational volume() const;
  bool contains(const std::vector<Rational>& u) const;

  // Componentwise intersection; nullopt when the overlap has zero volume.
  static std::optional<Box> intersect(const Box& a, const Box& b);

  friend bool operator==(const Box& a, const Box& b) {
    return a.lower == b.lower && a.upper == b.upper;
  }
};

struct Stratum {
  std::vector<Box> region;  // pairwise disjoint boxes
  int allocation = 0;       // k_i, number of sample indices assigned
  Rational mass = 0;        // filled by Partition: sum of region volumes

  Stratum() = default;
  Stratum(std::vector<Box> boxes, int k) : region(std::move(boxes)), allocation(k) {}
};

// Proof object for "coarse is refined by fine": for each coarse stratum the
// fine strata whose regions union to it exactly, allocations included.
struct RefinementWitness {
  std::vector<std::vector<int>> fine_of_coarse;
};

RefinementWitness compose(const RefinementWitness& coarse_to_mid,
                          const RefinementWitness& mid_to_fine);

// Ordered partition of [0,1]^d into strata whose masses are exact multiples
// of 1/n. Immutable after construction.
class Partition {
 public:
  // Validates box bounds, disjointness, total mass one, and the allocation
  // bookkeeping mass_i = k_i/n. Throws std::invalid_argument on any breach.
  Partition(BaseMeasure base, std::vector<Stratum> strata, int total_samples);

  const BaseMeasure& base() const { return base_; }
  int dimension() const { return base_.dimension(); }
  int total_samples() const { return total_samples_; }
  int size() const { return static_cast<int>(strata_.size()); }
  const Stratum& stratum(int i) const { return strata_.at(static_cast<size_t>(i)); }
  const std::vector<Stratum>& strata() const { return strata_; }

  // Sample indices {0..n-1} in consecutive blocks, block i of size k_i.
  const std::vector<std::vector<int>>& index_partition() const { return index_partition_; }

  // Stable content hash used as a report identifier.
  std::string digest() const;

  friend bool operator==(const Partition& a, const Partition& b);

 private:
  BaseMeasure base_;
  std::vector<Stratum> strata_;
  int total_samples_;
  std::vector<std::vector<int>> index_partition_;
};

// Single stratum [0,1]^d carrying all n indices.
Partition coarsest_partition(int n, BaseMeasure base);

// Grid cells from per-axis interior cuts; every cell must have mass exactly
// 1/n and receives allocation one. Cells are ordered lexicographically with
// axis 0 most significant, which in one dimension is left to right.
Partition finest_partition(int n, BaseMeasure base,
                           const std::vector<std::vector<Rational>>& cuts);

// Proves coarse <=_ref fine or throws std::invalid_argument naming the first
// coarse stratum that has no exact fine cover.
RefinementWitness refinement_witness(const Partition& coarse, const Partition& fine);

struct SplitResult {
  Partition partition;
  RefinementWitness from_parent;  // witness that the parent refines to this
};

// Splits stratum i by the axis threshold a into {x_j <= a} and {x_j > a}
// pieces inserted in place (lower piece first). Both pieces must have
// positive mass that is an integer multiple of 1/n.
SplitResult split_stratum(const Partition& p, int stratum_index, int axis,
                          const Rational& threshold);

// d = 1 only: every stratum is one interval and list order runs left to
// right. Throws std::invalid_argument for d != 1.
bool is_monotone_partition(const Partition& p);

}  // namespace stratmc
