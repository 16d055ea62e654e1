#include "stratmc/function_model.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace stratmc {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument(message);
}

void validate_tiling(int dimension, const std::vector<PiecewiseConstantFn::Cell>& cells) {
  if (cells.empty()) fail("function needs at least one cell");
  Rational total = 0;
  for (const auto& c : cells) {
    if (c.box.dimension() != dimension) fail("cell dimension mismatch");
    if (c.box.volume() == 0) fail("zero-volume cell");
    total += c.box.volume();
  }
  if (total != 1) fail("cells must tile the unit cube");
  for (size_t a = 0; a < cells.size(); ++a)
    for (size_t b = a + 1; b < cells.size(); ++b)
      if (Box::intersect(cells[a].box, cells[b].box)) fail("cells overlap");
}

}  // namespace

PiecewiseConstantFn::PiecewiseConstantFn(int dimension, std::vector<Cell> cells,
                                         bool declare_unit_range)
    : dimension_(dimension), cells_(std::move(cells)), unit_range_(declare_unit_range) {
  validate_tiling(dimension_, cells_);
  if (unit_range_) {
    for (const auto& c : cells_)
      if (c.value < 0 || c.value > 1)
        fail("value " + to_string(c.value) + " outside the declared range [0,1]");
  }
}

PiecewiseConstantFn PiecewiseConstantFn::constant(int dimension, const Rational& value,
                                                  bool declare_unit_range) {
  std::vector<Cell> cells;
  cells.push_back({Box::unit_cube(dimension), value});
  return PiecewiseConstantFn(dimension, std::move(cells), declare_unit_range);
}

PiecewiseConstantFn PiecewiseConstantFn::from_grid(
    const std::vector<std::vector<Rational>>& cuts, std::vector<Rational> values,
    bool declare_unit_range) {
  const int d = static_cast<int>(cuts.size());
  std::vector<std::vector<Rational>> walls(cuts.size());
  size_t cell_count = 1;
  for (size_t j = 0; j < cuts.size(); ++j) {
    walls[j].push_back(Rational(0));
    for (const Rational& c : cuts[j]) {
      if (c <= walls[j].back() || c >= 1) fail("cuts must be strictly increasing inside (0,1)");
      walls[j].push_back(c);
    }
    walls[j].push_back(Rational(1));
    cell_count *= walls[j].size() - 1;
  }
  if (values.size() != cell_count) fail("one value per grid cell required");

  std::vector<Cell> cells;
  cells.reserve(cell_count);
  std::vector<size_t> idx(cuts.size(), 0);
  for (size_t flat = 0; flat < cell_count; ++flat) {
    std::vector<Rational> lo(cuts.size()), hi(cuts.size());
    for (size_t j = 0; j < cuts.size(); ++j) {
      lo[j] = walls[j][idx[j]];
      hi[j] = walls[j][idx[j] + 1];
    }
    cells.push_back({Box(std::move(lo), std::move(hi)), values[flat]});
    size_t j = idx.size();
    while (j > 0) {
      --j;
      if (++idx[j] < walls[j].size() - 1) break;
      idx[j] = 0;
    }
  }
  return PiecewiseConstantFn(d, std::move(cells), declare_unit_range);
}

PiecewiseConstantFn PiecewiseConstantFn::step_1d(const std::vector<Rational>& cuts,
                                                 std::vector<Rational> values,
                                                 bool declare_unit_range) {
  return from_grid({cuts}, std::move(values), declare_unit_range);
}

Rational PiecewiseConstantFn::eval(const std::vector<Rational>& u) const {
  if (u.size() != static_cast<size_t>(dimension_)) fail("point dimension mismatch");
  for (const Rational& x : u)
    if (x < 0 || x > 1) throw std::domain_error("point outside [0,1]^d");
  for (const auto& c : cells_)
    if (c.box.contains(u)) return c.value;
  throw std::domain_error("point not owned by any cell");
}

double PiecewiseConstantFn::eval(const std::vector<double>& u) const {
  std::vector<Rational> exact(u.size());
  for (size_t j = 0; j < u.size(); ++j) exact[j] = rational_from_double(u[j]);
  return to_double(eval(exact));
}

Rational PiecewiseConstantFn::ess_sup() const {
  Rational best = cells_.front().value;
  for (const auto& c : cells_) best = std::max(best, c.value);
  return best;
}

bool operator==(const PiecewiseConstantFn& a, const PiecewiseConstantFn& b) {
  if (a.dimension_ != b.dimension_ || a.unit_range_ != b.unit_range_ ||
      a.cells_.size() != b.cells_.size())
    return false;
  for (size_t i = 0; i < a.cells_.size(); ++i)
    if (!(a.cells_[i].box == b.cells_[i].box) || a.cells_[i].value != b.cells_[i].value)
      return false;
  return true;
}

DiscreteDist stratum_value_dist(const PiecewiseConstantFn& f, const Stratum& s,
                                const BaseMeasure& base) {
  if (!base.uniform())
    fail("exact value distributions require uniform marginals");
  if (f.dimension() != base.dimension()) fail("function dimension mismatch");
  if (s.mass == 0) fail("zero-mass stratum");

  std::map<Rational, Rational> weights;
  Rational covered = 0;
  for (const auto& cell : f.cells()) {
    Rational overlap = 0;
    for (const Box& b : s.region)
      if (auto inter = Box::intersect(cell.box, b)) overlap += inter->volume();
    if (overlap != 0) {
      weights[cell.value] += overlap / s.mass;
      covered += overlap;
    }
  }
  if (covered != s.mass) fail("stratum region escapes the function domain");
  return DiscreteDist::from_weights(weights);
}

Rational stratum_mean(const PiecewiseConstantFn& f, const Stratum& s,
                      const BaseMeasure& base) {
  return stratum_value_dist(f, s, base).mean();
}

Rational global_mean(const PiecewiseConstantFn& f, const BaseMeasure& base) {
  if (!base.uniform()) fail("exact means require uniform marginals");
  if (f.dimension() != base.dimension()) fail("function dimension mismatch");
  Rational total = 0;
  for (const auto& c : f.cells()) total += c.value * c.box.volume();
  return total;
}

bool is_monotone(const PiecewiseConstantFn& f) {
  // Decompose onto the arrangement grid of all cell walls, then compare
  // neighbours along each axis.
  const size_t d = static_cast<size_t>(f.dimension());
  std::vector<std::vector<Rational>> coords(d);
  for (const auto& c : f.cells())
    for (size_t j = 0; j < d; ++j) {
      coords[j].push_back(c.box.lower[j]);
      coords[j].push_back(c.box.upper[j]);
    }
  std::vector<size_t> shape(d);
  for (size_t j = 0; j < d; ++j) {
    std::sort(coords[j].begin(), coords[j].end());
    coords[j].erase(std::unique(coords[j].begin(), coords[j].end()), coords[j].end());
    shape[j] = coords[j].size() - 1;
  }
  size_t cell_count = 1;
  for (size_t n : shape) cell_count *= n;

  std::vector<Rational> value(cell_count);
  std::vector<size_t> idx(d, 0);
  for (size_t flat = 0; flat < cell_count; ++flat) {
    std::vector<Rational> mid(d);
    for (size_t j = 0; j < d; ++j)
      mid[j] = (coords[j][idx[j]] + coords[j][idx[j] + 1]) / 2;
    value[flat] = f.eval(mid);
    size_t j = d;
    while (j > 0) {
      --j;
      if (++idx[j] < shape[j]) break;
      idx[j] = 0;
    }
  }

  std::vector<size_t> stride(d, 1);
  for (size_t j = d; j-- > 1;) stride[j - 1] = stride[j] * shape[j];
  std::fill(idx.begin(), idx.end(), 0);
  for (size_t flat = 0; flat < cell_count; ++flat) {
    for (size_t j = 0; j < d; ++j)
      if (idx[j] + 1 < shape[j] && value[flat] > value[flat + stride[j]]) return false;
    size_t j = d;
    while (j > 0) {
      --j;
      if (++idx[j] < shape[j]) break;
      idx[j] = 0;
    }
  }
  return true;
}

FunctionOracle::FunctionOracle(int dimension, Evaluator evaluator, bool unit_range)
    : dimension_(dimension), evaluator_(std::move(evaluator)), unit_range_(unit_range) {
  if (dimension_ < 1) fail("dimension must be positive");
  if (!evaluator_) fail("oracle needs an evaluator");
}

double FunctionOracle::operator()(const std::vector<double>& u) const {
  count_.fetch_add(1, std::memory_order_relaxed);
  return evaluator_(u);
}

NoiseSpec NoiseSpec::gaussian(const Rational& variance) {
  if (variance < 0) fail("variance must be non-negative");
  return {Kind::gaussian, variance};
}

NoiseSpec NoiseSpec::two_point(const Rational& magnitude) {
  if (magnitude < 0) fail("magnitude must be non-negative");
  return {Kind::two_point, magnitude};
}

Rational NoiseSpec::variance() const {
  switch (kind) {
    case Kind::none:
      return 0;
    case Kind::gaussian:
      return param;
    case Kind::two_point:
      return param * param;
  }
  return 0;
}

}  // namespace stratmc
