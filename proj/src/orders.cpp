#include "stratmc/orders.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>

namespace stratmc {

namespace {

std::vector<Rational> sorted_descending(std::vector<Rational> v) {
  std::sort(v.begin(), v.end(), std::greater<Rational>());
  return v;
}

std::vector<Rational> support_union(const DiscreteDist& a, const DiscreteDist& b) {
  std::vector<Rational> points = a.support();
  points.insert(points.end(), b.support().begin(), b.support().end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

// 1/n times a sum of independent Bernoulli trials, exact.
DiscreteDist poisson_binomial_mean(const std::vector<Rational>& params, int n) {
  std::vector<Rational> count(params.size() + 1, Rational(0));
  count[0] = 1;
  size_t trials = 0;
  for (const Rational& p : params) {
    if (p < 0 || p > 1) throw std::invalid_argument("Bernoulli parameter outside [0,1]");
    ++trials;
    for (size_t c = trials; c >= 1; --c)
      count[c] = count[c] * (1 - p) + count[c - 1] * p;
    count[0] *= 1 - p;
  }
  std::map<Rational, Rational> weights;
  for (size_t c = 0; c < count.size(); ++c)
    weights[Rational(static_cast<long>(c)) / n] += count[c];
  return DiscreteDist::from_weights(weights);
}

}  // namespace

bool majorizes(const std::vector<Rational>& x, const std::vector<Rational>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector length mismatch");
  if (x.empty()) throw std::invalid_argument("vectors must be non-empty");
  const auto xs = sorted_descending(x);
  const auto ys = sorted_descending(y);
  Rational x_sum = 0, y_sum = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    x_sum += xs[k];
    y_sum += ys[k];
    if (k + 1 < xs.size() && y_sum > x_sum) return false;
  }
  return x_sum == y_sum;
}

bool dominates_st(const DiscreteDist& lo, const DiscreteDist& hi) {
  for (const Rational& t : support_union(lo, hi))
    if (lo.cdf(t) < hi.cdf(t)) return false;
  return true;
}

bool dominates_st_cdf(const CensoredSupCdf& lo, const CensoredSupCdf& hi,
                      int grid_per_segment) {
  if (grid_per_segment < 0) throw std::invalid_argument("grid size must be non-negative");
  std::vector<Rational> points = lo.breakpoints();
  points.insert(points.end(), hi.breakpoints().begin(), hi.breakpoints().end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  for (size_t s = 0; s < points.size(); ++s) {
    if (lo.value(points[s]) < hi.value(points[s])) return false;
    if (s + 1 == points.size()) break;
    const Rational gap = points[s + 1] - points[s];
    for (int g = 1; g <= grid_per_segment; ++g) {
      const Rational t = points[s] + gap * g / (grid_per_segment + 1);
      if (lo.value(t) < hi.value(t)) return false;
    }
  }
  return true;
}

OrderVerdict dominates_cx(const DiscreteDist& lo, const DiscreteDist& hi) {
  if (lo.mean() != hi.mean()) return {false, std::nullopt};
  for (const Rational& t : support_union(lo, hi))
    if (lo.stop_loss(t) > hi.stop_loss(t)) return {false, t};
  return {true, std::nullopt};
}

OrderVerdict dominates_icx(const DiscreteDist& lo, const DiscreteDist& hi) {
  if (lo.mean() > hi.mean()) return {false, std::nullopt};
  for (const Rational& t : support_union(lo, hi))
    if (lo.stop_loss(t) > hi.stop_loss(t)) return {false, t};
  return {true, std::nullopt};
}

GridDensity::GridDensity(std::vector<int> shape, std::vector<Rational> weights,
                         bool normalized)
    : shape_(std::move(shape)), weights_(std::move(weights)), normalized_(normalized) {
  if (shape_.empty()) throw std::invalid_argument("grid needs a shape");
  size_t cells = 1;
  for (int s : shape_) {
    if (s < 1) throw std::invalid_argument("grid sides must be positive");
    cells *= static_cast<size_t>(s);
  }
  if (weights_.size() != cells) throw std::invalid_argument("one weight per cell required");
  Rational total = 0;
  for (const Rational& w : weights_) {
    if (w < 0) throw std::invalid_argument("weights must be non-negative");
    total += w;
  }
  if (normalized_ && total != 1)
    throw std::invalid_argument("normalized grid must sum to one");
  if (total == 0) throw std::invalid_argument("grid has no mass");
}

std::size_t GridDensity::flatten(const std::vector<int>& index) const {
  if (index.size() != shape_.size()) throw std::invalid_argument("index dimension mismatch");
  std::size_t flat = 0;
  for (size_t j = 0; j < shape_.size(); ++j) {
    if (index[j] < 0 || index[j] >= shape_[j]) throw std::out_of_range("grid index");
    flat = flat * static_cast<size_t>(shape_[j]) + static_cast<size_t>(index[j]);
  }
  return flat;
}

std::vector<int> GridDensity::unflatten(std::size_t flat) const {
  std::vector<int> index(shape_.size());
  for (size_t j = shape_.size(); j-- > 0;) {
    index[j] = static_cast<int>(flat % static_cast<size_t>(shape_[j]));
    flat /= static_cast<size_t>(shape_[j]);
  }
  return index;
}

const Rational& GridDensity::at(const std::vector<int>& index) const {
  return weights_[flatten(index)];
}

Rational GridDensity::total() const {
  Rational t = 0;
  for (const Rational& w : weights_) t += w;
  return t;
}

bool is_mtp2(const GridDensity& g) {
  if (g.dimension() > 3) throw std::invalid_argument("MTP2 check limited to d <= 3");
  for (int s : g.shape())
    if (s > 16) throw std::invalid_argument("MTP2 check limited to side <= 16");

  const size_t cells = g.cell_count();
  for (size_t a = 0; a < cells; ++a) {
    for (size_t b = a + 1; b < cells; ++b) {
      const auto ia = g.unflatten(a);
      const auto ib = g.unflatten(b);
      std::vector<int> join(ia.size()), meet(ia.size());
      for (size_t j = 0; j < ia.size(); ++j) {
        join[j] = std::max(ia[j], ib[j]);
        meet[j] = std::min(ia[j], ib[j]);
      }
      if (g.at_flat(a) * g.at_flat(b) > g.at(join) * g.at(meet)) return false;
    }
  }
  return true;
}

bool karlin_novikoff_check(const std::vector<Rational>& p, const std::vector<Rational>& q,
                           int n) {
  if (p.size() != q.size() || p.size() != static_cast<size_t>(n))
    throw std::invalid_argument("parameter vectors must have length n");
  for (const auto& vec : {p, q})
    for (const Rational& v : vec)
      if (v < 0 || v > 1) throw std::invalid_argument("entries must lie in [0,1]");
  if (!majorizes(q, p))
    throw std::invalid_argument("precondition p majorized-by q does not hold");
  const DiscreteDist law_p = poisson_binomial_mean(p, n);
  const DiscreteDist law_q = poisson_binomial_mean(q, n);
  return dominates_cx(law_q, law_p).holds;
}

bool mixture_max_check(const std::vector<BlockLaw>& blocks,
                       const std::vector<std::vector<int>>& grouping) {
  if (blocks.empty()) throw std::invalid_argument("no blocks");
  std::vector<int> seen(blocks.size(), 0);
  for (const auto& group : grouping) {
    if (group.empty()) throw std::invalid_argument("empty group");
    for (int b : group) {
      if (b < 0 || b >= static_cast<int>(blocks.size()))
        throw std::invalid_argument("group names an unknown block");
      seen[static_cast<size_t>(b)] += 1;
    }
  }
  for (int count : seen)
    if (count != 1) throw std::invalid_argument("grouping must cover each block exactly once");
  for (const auto& block : blocks)
    if (block.size < 1) throw std::invalid_argument("block sizes must be positive");

  std::vector<Rational> points;
  for (const auto& block : blocks)
    points.insert(points.end(), block.law.support().begin(), block.law.support().end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  for (const Rational& t : points) {
    Rational fine = 1, coarse = 1;
    for (const auto& block : blocks)
      fine *= rat_pow(block.law.cdf(t), static_cast<unsigned>(block.size));
    for (const auto& group : grouping) {
      Rational mixture_cdf = 0;
      int group_size = 0;
      for (int b : group) group_size += blocks[static_cast<size_t>(b)].size;
      for (int b : group)
        mixture_cdf += Rational(blocks[static_cast<size_t>(b)].size) / group_size *
                       blocks[static_cast<size_t>(b)].law.cdf(t);
      coarse *= rat_pow(mixture_cdf, static_cast<unsigned>(group_size));
    }
    if (coarse < fine) return false;
  }
  return true;
}

bool conditional_split_st(const GridDensity& g, const std::vector<bool>& upper_set) {
  const size_t cells = g.cell_count();
  if (cells > 12) throw std::invalid_argument("split check limited to 12 cells");
  if (upper_set.size() != cells) throw std::invalid_argument("mask size mismatch");

  // The mask must be an increasing set of the cell poset.
  auto leq = [&](size_t a, size_t b) {
    const auto ia = g.unflatten(a);
    const auto ib = g.unflatten(b);
    for (size_t j = 0; j < ia.size(); ++j)
      if (ia[j] > ib[j]) return false;
    return true;
  };
  for (size_t a = 0; a < cells; ++a)
    for (size_t b = 0; b < cells; ++b)
      if (upper_set[a] && leq(a, b) && !upper_set[b])
        throw std::invalid_argument("mask is not an increasing set");

  Rational mass_in = 0, mass_out = 0;
  for (size_t c = 0; c < cells; ++c)
    (upper_set[c] ? mass_in : mass_out) += g.at_flat(c);
  const Rational total = mass_in + mass_out;
  if (mass_in == 0 || mass_out == 0)
    throw std::invalid_argument("split needs positive mass on both sides");
  (void)total;

  // Enumerate every increasing set A and compare P(A | G) with P(A | G^c).
  for (std::uint64_t mask = 0; mask < (1ULL << cells); ++mask) {
    bool increasing = true;
    for (size_t a = 0; a < cells && increasing; ++a)
      if (mask >> a & 1)
        for (size_t b = 0; b < cells; ++b)
          if (leq(a, b) && !(mask >> b & 1)) {
            increasing = false;
            break;
          }
    if (!increasing) continue;
    Rational hit_in = 0, hit_out = 0;
    for (size_t c = 0; c < cells; ++c)
      if (mask >> c & 1) (upper_set[c] ? hit_in : hit_out) += g.at_flat(c);
    // P(A | G) >= P(A | G^c) without division.
    if (hit_in * mass_out < hit_out * mass_in) return false;
  }
  return true;
}

CdfView cdf_view(const DiscreteDist& dist) {
  struct Table {
    std::vector<double> values;
    std::vector<double> cumulative;
  };
  auto table = std::make_shared<Table>();
  double run = 0;
  for (size_t i = 0; i < dist.size(); ++i) {
    run += to_double(dist.probs()[i]);
    table->values.push_back(to_double(dist.support()[i]));
    table->cumulative.push_back(run);
  }
  table->cumulative.back() = 1.0;

  CdfView view;
  view.breakpoints = table->values;
  view.at = [table](double t) {
    const auto it = std::upper_bound(table->values.begin(), table->values.end(), t);
    if (it == table->values.begin()) return 0.0;
    return table->cumulative[static_cast<size_t>(it - table->values.begin()) - 1];
  };
  view.at_left = [table](double t) {
    const auto it = std::lower_bound(table->values.begin(), table->values.end(), t);
    if (it == table->values.begin()) return 0.0;
    return table->cumulative[static_cast<size_t>(it - table->values.begin()) - 1];
  };
  return view;
}

CdfView cdf_view(const CensoredSupCdf& cdf) {
  auto shared = std::make_shared<CensoredSupCdf>(cdf);
  CdfView view;
  for (const Rational& b : shared->breakpoints()) view.breakpoints.push_back(to_double(b));
  auto clamp_eval = [shared](double t) {
    if (t < 0) return 0.0;
    if (t > 1) return 1.0;
    return to_double(shared->value(rational_from_double(t)));
  };
  view.at = clamp_eval;
  // Continuous except for the atom at zero.
  view.at_left = [clamp_eval](double t) { return t <= 0 ? 0.0 : clamp_eval(t); };
  return view;
}

DkwResult dkw_validate(const std::vector<double>& values, const CdfView& exact,
                       double alpha) {
  if (values.size() < 30) throw std::invalid_argument("need at least 30 replicates");
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must be in (0,1)");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());

  std::vector<double> candidates = sorted;
  candidates.insert(candidates.end(), exact.breakpoints.begin(), exact.breakpoints.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  double sup = 0;
  for (double t : candidates) {
    const double at_or_below =
        static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
    const double below =
        static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
    sup = std::max(sup, std::abs(at_or_below / count - exact.at(t)));
    sup = std::max(sup, std::abs(below / count - exact.at_left(t)));
  }

  DkwResult result;
  result.sup_discrepancy = sup;
  result.band = std::sqrt(std::log(2.0 / alpha) / (2.0 * count));
  result.pass = sup <= result.band;
  return result;
}

DkwResult dkw_validate(const Replication& rep, const CdfView& exact, double alpha) {
  return dkw_validate(rep.values, exact, alpha);
}

}  // namespace stratmc
