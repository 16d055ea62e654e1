#include "stratmc/measure_space.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "stratmc/rng.hpp"

namespace stratmc {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument(message);
}

Rational stratum_volume(const Stratum& s) {
  Rational total = 0;
  for (const Box& b : s.region) total += b.volume();
  return total;
}

// Per-axis sorted coordinate arrays spanning every box bound of the given
// partitions. Any box of either partition decomposes exactly into grid cells.
struct ArrangementGrid {
  std::vector<std::vector<Rational>> coords;  // per axis, sorted unique, 0..1

  explicit ArrangementGrid(int dimension) : coords(static_cast<size_t>(dimension)) {
    for (auto& axis : coords) {
      axis.push_back(Rational(0));
      axis.push_back(Rational(1));
    }
  }

  void add(const Partition& p) {
    for (const Stratum& s : p.strata())
      for (const Box& b : s.region)
        for (size_t j = 0; j < b.lower.size(); ++j) {
          coords[j].push_back(b.lower[j]);
          coords[j].push_back(b.upper[j]);
        }
  }

  void finish() {
    for (auto& axis : coords) {
      std::sort(axis.begin(), axis.end());
      axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    }
  }

  size_t cell_count() const {
    size_t n = 1;
    for (const auto& axis : coords) n *= axis.size() - 1;
    return n;
  }

  int axis_index(size_t axis, const Rational& value) const {
    const auto& c = coords[axis];
    const auto it = std::lower_bound(c.begin(), c.end(), value);
    if (it == c.end() || *it != value)
      fail("box bound does not lie on the arrangement grid");
    return static_cast<int>(it - c.begin());
  }

  // Flat ids of the grid cells covered by the box.
  std::vector<size_t> cells_of(const Box& b) const {
    const size_t d = coords.size();
    std::vector<int> lo(d), hi(d);
    for (size_t j = 0; j < d; ++j) {
      lo[j] = axis_index(j, b.lower[j]);
      hi[j] = axis_index(j, b.upper[j]);
    }
    std::vector<size_t> out;
    std::vector<int> idx(lo);
    while (true) {
      size_t flat = 0;
      for (size_t j = 0; j < d; ++j)
        flat = flat * (coords[j].size() - 1) + static_cast<size_t>(idx[j]);
      out.push_back(flat);
      size_t j = d;
      while (j > 0) {
        --j;
        if (++idx[j] < hi[j]) break;
        idx[j] = lo[j];
        if (j == 0) return out;
      }
    }
  }
};

}  // namespace

double QuantileTransform::apply(double u) const {
  if (identity()) return u;
  // Linear interpolation between the bracketing control points.
  for (size_t i = 1; i < points.size(); ++i) {
    const double x0 = to_double(points[i - 1].first);
    const double x1 = to_double(points[i].first);
    if (u <= x1 || i + 1 == points.size()) {
      const double y0 = to_double(points[i - 1].second);
      const double y1 = to_double(points[i].second);
      if (x1 == x0) return y1;
      return y0 + (y1 - y0) * (u - x0) / (x1 - x0);
    }
  }
  return u;
}

BaseMeasure::BaseMeasure(int dimension) : BaseMeasure(dimension, {}) {}

BaseMeasure::BaseMeasure(int dimension, std::vector<QuantileTransform> marginals)
    : dimension_(dimension), marginals_(std::move(marginals)) {
  if (dimension_ < 1) fail("dimension must be positive");
  if (!marginals_.empty() && marginals_.size() != static_cast<size_t>(dimension_))
    fail("need one marginal transform per axis");
  for (const auto& m : marginals_) {
    if (m.identity()) continue;
    if (m.points.front() != std::pair<Rational, Rational>{Rational(0), Rational(0)} ||
        m.points.back() != std::pair<Rational, Rational>{Rational(1), Rational(1)})
      fail("marginal transform must map [0,1] onto [0,1]");
    for (size_t i = 1; i < m.points.size(); ++i) {
      if (m.points[i].first <= m.points[i - 1].first || m.points[i].second < m.points[i - 1].second)
        fail("marginal transform must be non-decreasing");
    }
  }
}

bool BaseMeasure::uniform() const {
  for (const auto& m : marginals_)
    if (!m.identity()) return false;
  return true;
}

bool operator==(const BaseMeasure& a, const BaseMeasure& b) {
  if (a.dimension_ != b.dimension_) return false;
  auto pts = [](const BaseMeasure& m) {
    std::vector<std::vector<std::pair<Rational, Rational>>> out;
    for (const auto& t : m.marginals_) out.push_back(t.points);
    out.resize(static_cast<size_t>(m.dimension_));
    return out;
  };
  return pts(a) == pts(b);
}

Box::Box(std::vector<Rational> lo, std::vector<Rational> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.empty() || lower.size() != upper.size()) fail("box bounds size mismatch");
  for (size_t j = 0; j < lower.size(); ++j) {
    if (lower[j] < 0 || upper[j] > 1 || lower[j] > upper[j])
      fail("box bounds must satisfy 0 <= lower <= upper <= 1");
  }
}

Box Box::unit_cube(int dimension) {
  return Box(std::vector<Rational>(static_cast<size_t>(dimension), Rational(0)),
             std::vector<Rational>(static_cast<size_t>(dimension), Rational(1)));
}

Rational Box::volume() const {
  Rational v = 1;
  for (size_t j = 0; j < lower.size(); ++j) v *= upper[j] - lower[j];
  return v;
}

bool Box::contains(const std::vector<Rational>& u) const {
  if (u.size() != lower.size()) fail("point dimension mismatch");
  for (size_t j = 0; j < u.size(); ++j) {
    const bool above = (lower[j] == 0) ? u[j] >= 0 : u[j] > lower[j];
    if (!above || u[j] > upper[j]) return false;
  }
  return true;
}

std::optional<Box> Box::intersect(const Box& a, const Box& b) {
  if (a.dimension() != b.dimension()) fail("box dimension mismatch");
  std::vector<Rational> lo(a.lower.size()), hi(a.lower.size());
  for (size_t j = 0; j < a.lower.size(); ++j) {
    lo[j] = std::max(a.lower[j], b.lower[j]);
    hi[j] = std::min(a.upper[j], b.upper[j]);
    if (lo[j] >= hi[j]) return std::nullopt;
  }
  return Box(std::move(lo), std::move(hi));
}

RefinementWitness compose(const RefinementWitness& coarse_to_mid,
                          const RefinementWitness& mid_to_fine) {
  RefinementWitness out;
  out.fine_of_coarse.reserve(coarse_to_mid.fine_of_coarse.size());
  for (const auto& mids : coarse_to_mid.fine_of_coarse) {
    std::vector<int> fines;
    for (int m : mids) {
      const auto& f = mid_to_fine.fine_of_coarse.at(static_cast<size_t>(m));
      fines.insert(fines.end(), f.begin(), f.end());
    }
    std::sort(fines.begin(), fines.end());
    out.fine_of_coarse.push_back(std::move(fines));
  }
  return out;
}

Partition::Partition(BaseMeasure base, std::vector<Stratum> strata, int total_samples)
    : base_(std::move(base)), strata_(std::move(strata)), total_samples_(total_samples) {
  if (total_samples_ < 1) fail("sample size must be positive");
  if (strata_.empty()) fail("partition needs at least one stratum");

  const Rational unit = Rational(1) / total_samples_;
  Rational total_mass = 0;
  int total_alloc = 0;
  for (size_t i = 0; i < strata_.size(); ++i) {
    Stratum& s = strata_[i];
    if (s.allocation < 1) fail("allocation must be positive in stratum " + std::to_string(i));
    if (s.region.empty()) fail("empty region in stratum " + std::to_string(i));
    for (const Box& b : s.region) {
      if (b.dimension() != base_.dimension()) fail("box dimension mismatch");
      if (b.volume() == 0) fail("zero-volume box in stratum " + std::to_string(i));
    }
    s.mass = stratum_volume(s);
    if (s.mass != unit * s.allocation)
      fail("mass-mismatch: stratum " + std::to_string(i) + " has mass " + to_string(s.mass) +
           ", expected " + to_string(unit * s.allocation));
    total_mass += s.mass;
    total_alloc += s.allocation;
  }
  if (total_alloc != total_samples_) fail("allocations must sum to the sample size");
  if (total_mass != 1) fail("strata must cover the unit cube");

  // Overlap check: disjointness plus total mass one gives an exact cover.
  std::vector<const Box*> boxes;
  for (const Stratum& s : strata_)
    for (const Box& b : s.region) boxes.push_back(&b);
  for (size_t a = 0; a < boxes.size(); ++a)
    for (size_t b = a + 1; b < boxes.size(); ++b)
      if (Box::intersect(*boxes[a], *boxes[b]))
        fail("strata regions overlap");

  index_partition_.reserve(strata_.size());
  int next = 0;
  for (const Stratum& s : strata_) {
    std::vector<int> block(static_cast<size_t>(s.allocation));
    for (int& id : block) id = next++;
    index_partition_.push_back(std::move(block));
  }
}

std::string Partition::digest() const {
  std::ostringstream os;
  os << base_.dimension() << '|' << total_samples_;
  for (const Stratum& s : strata_) {
    os << '|' << s.allocation;
    for (const Box& b : s.region) {
      for (const Rational& r : b.lower) os << ',' << to_string(r);
      os << ';';
      for (const Rational& r : b.upper) os << ',' << to_string(r);
    }
  }
  const std::string text = os.str();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream hex;
  hex << std::hex << h;
  return hex.str();
}

bool operator==(const Partition& a, const Partition& b) {
  if (!(a.base_ == b.base_) || a.total_samples_ != b.total_samples_ ||
      a.strata_.size() != b.strata_.size())
    return false;
  for (size_t i = 0; i < a.strata_.size(); ++i) {
    if (a.strata_[i].allocation != b.strata_[i].allocation) return false;
    if (!(a.strata_[i].region == b.strata_[i].region)) return false;
  }
  return true;
}

Partition coarsest_partition(int n, BaseMeasure base) {
  const int d = base.dimension();
  std::vector<Stratum> strata;
  strata.emplace_back(std::vector<Box>{Box::unit_cube(d)}, n);
  return Partition(std::move(base), std::move(strata), n);
}

Partition finest_partition(int n, BaseMeasure base,
                           const std::vector<std::vector<Rational>>& cuts) {
  const int d = base.dimension();
  if (cuts.size() != static_cast<size_t>(d)) fail("need cut list per axis");

  std::vector<std::vector<Rational>> walls(static_cast<size_t>(d));
  for (size_t j = 0; j < walls.size(); ++j) {
    walls[j].push_back(Rational(0));
    for (const Rational& c : cuts[j]) {
      if (c <= walls[j].back() || c >= 1) fail("cuts must be strictly increasing inside (0,1)");
      walls[j].push_back(c);
    }
    walls[j].push_back(Rational(1));
  }

  std::vector<Stratum> strata;
  const Rational unit = Rational(1) / n;
  std::vector<size_t> idx(static_cast<size_t>(d), 0);
  while (true) {
    std::vector<Rational> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d));
    for (size_t j = 0; j < idx.size(); ++j) {
      lo[j] = walls[j][idx[j]];
      hi[j] = walls[j][idx[j] + 1];
    }
    Box cell(std::move(lo), std::move(hi));
    if (cell.volume() != unit)
      fail("mass-mismatch: grid cell has mass " + to_string(cell.volume()) +
           ", expected " + to_string(unit));
    strata.emplace_back(std::vector<Box>{std::move(cell)}, 1);

    size_t j = idx.size();
    bool done = true;
    while (j > 0) {
      --j;
      if (++idx[j] < walls[j].size() - 1) {
        done = false;
        break;
      }
      idx[j] = 0;
    }
    if (done) break;
  }
  if (strata.size() != static_cast<size_t>(n)) fail("cuts must produce exactly n cells");
  return Partition(std::move(base), std::move(strata), n);
}

RefinementWitness refinement_witness(const Partition& coarse, const Partition& fine) {
  if (!(coarse.base() == fine.base())) fail("partitions must share the base measure");
  if (coarse.total_samples() != fine.total_samples())
    fail("partitions must share the sample size");

  ArrangementGrid grid(coarse.dimension());
  grid.add(coarse);
  grid.add(fine);
  grid.finish();

  std::vector<int> cell_fine(grid.cell_count(), -1);
  for (int i = 0; i < fine.size(); ++i)
    for (const Box& b : fine.stratum(i).region)
      for (size_t cell : grid.cells_of(b)) cell_fine[cell] = i;

  RefinementWitness witness;
  witness.fine_of_coarse.resize(static_cast<size_t>(coarse.size()));
  std::vector<int> owner_of_fine(static_cast<size_t>(fine.size()), -1);
  for (int c = 0; c < coarse.size(); ++c) {
    std::set<int> members;
    for (const Box& b : coarse.stratum(c).region)
      for (size_t cell : grid.cells_of(b)) members.insert(cell_fine[cell]);
    for (int m : members) {
      if (owner_of_fine[static_cast<size_t>(m)] != -1)
        fail("not-a-refinement: coarse stratum " + std::to_string(c) +
             " has no exact fine cover");
      owner_of_fine[static_cast<size_t>(m)] = c;
    }
    witness.fine_of_coarse[static_cast<size_t>(c)].assign(members.begin(), members.end());
  }
  // Every fine cell landed somewhere, so spillover is the only failure mode:
  // a fine stratum crossing a coarse boundary shows up as a missing piece of
  // some coarse stratum's mass.
  for (int c = 0; c < coarse.size(); ++c) {
    Rational covered = 0;
    int alloc = 0;
    for (int m : witness.fine_of_coarse[static_cast<size_t>(c)]) {
      covered += fine.stratum(m).mass;
      alloc += fine.stratum(m).allocation;
    }
    if (covered != coarse.stratum(c).mass || alloc != coarse.stratum(c).allocation)
      fail("not-a-refinement: coarse stratum " + std::to_string(c) +
           " has no exact fine cover");
  }
  return witness;
}

SplitResult split_stratum(const Partition& p, int stratum_index, int axis,
                          const Rational& threshold) {
  if (stratum_index < 0 || stratum_index >= p.size()) fail("stratum index out of range");
  if (axis < 0 || axis >= p.dimension()) fail("axis out of range");
  const Stratum& target = p.stratum(stratum_index);

  std::vector<Box> low, high;
  for (const Box& b : target.region) {
    const size_t j = static_cast<size_t>(axis);
    if (threshold > b.lower[j]) {
      auto hi = b.upper;
      hi[j] = std::min(b.upper[j], threshold);
      low.emplace_back(b.lower, std::move(hi));
    }
    if (threshold < b.upper[j]) {
      auto lo = b.lower;
      lo[j] = std::max(b.lower[j], threshold);
      high.emplace_back(std::move(lo), b.upper);
    }
  }

  const int n = p.total_samples();
  auto mass_of = [](const std::vector<Box>& boxes) {
    Rational m = 0;
    for (const Box& b : boxes) m += b.volume();
    return m;
  };
  const Rational low_mass = mass_of(low);
  const Rational high_mass = mass_of(high);
  if (low_mass == 0 || high_mass == 0)
    fail("empty-piece: split threshold leaves a zero-mass piece");
  const Rational low_alloc = low_mass * n;
  if (denominator(low_alloc) != 1)
    fail("non-integer-allocation: piece mass " + to_string(low_mass) +
         " is not a multiple of 1/" + std::to_string(n));

  std::vector<Stratum> strata;
  strata.reserve(static_cast<size_t>(p.size()) + 1);
  for (int i = 0; i < p.size(); ++i) {
    if (i == stratum_index) {
      strata.emplace_back(std::move(low), static_cast<int>(numerator(low_alloc)));
      strata.emplace_back(std::move(high),
                          target.allocation - static_cast<int>(numerator(low_alloc)));
    } else {
      strata.push_back(p.stratum(i));
    }
  }

  RefinementWitness witness;
  witness.fine_of_coarse.resize(static_cast<size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) {
    if (i < stratum_index)
      witness.fine_of_coarse[static_cast<size_t>(i)] = {i};
    else if (i == stratum_index)
      witness.fine_of_coarse[static_cast<size_t>(i)] = {i, i + 1};
    else
      witness.fine_of_coarse[static_cast<size_t>(i)] = {i + 1};
  }
  return SplitResult{Partition(p.base(), std::move(strata), n), std::move(witness)};
}

bool is_monotone_partition(const Partition& p) {
  if (p.dimension() != 1) fail("monotone partitions are defined for d = 1 only");
  for (int i = 0; i < p.size(); ++i) {
    if (p.stratum(i).region.size() != 1) return false;
    if (i > 0 && p.stratum(i - 1).region[0].upper[0] > p.stratum(i).region[0].lower[0])
      return false;
  }
  return true;
}

}  // namespace stratmc
