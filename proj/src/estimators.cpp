#include "stratmc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stratmc {

namespace {

// Slot layout per draw: 0 picks a region box, 1..d the coordinates, d+1 the
// censoring threshold, d+2 and d+3 the noise.
constexpr unsigned kBoxSlot = 0;

std::vector<double> sample_point(const Stratum& s, const BaseMeasure& base,
                                 const DrawStream& stream) {
  const Box* box = &s.region.front();
  if (s.region.size() > 1) {
    const double pick = stream.unit(kBoxSlot) * to_double(s.mass);
    double cumulative = 0;
    for (const Box& b : s.region) {
      cumulative += to_double(b.volume());
      box = &b;
      if (pick < cumulative) break;
    }
  }
  const size_t d = static_cast<size_t>(base.dimension());
  std::vector<double> point(d);
  for (size_t j = 0; j < d; ++j) {
    const double lo = to_double(box->lower[j]);
    const double hi = to_double(box->upper[j]);
    double u = lo + (hi - lo) * stream.unit(static_cast<unsigned>(j) + 1);
    if (!base.uniform()) u = base.marginals()[j].apply(u);
    point[j] = u;
  }
  return point;
}

double noise_sample(const NoiseSpec& noise, const DrawStream& stream, unsigned slot) {
  switch (noise.kind) {
    case NoiseSpec::Kind::none:
      return 0;
    case NoiseSpec::Kind::gaussian:
      return std::sqrt(to_double(noise.param)) * stream.gaussian(slot);
    case NoiseSpec::Kind::two_point:
      return stream.unit(slot) < 0.5 ? -to_double(noise.param) : to_double(noise.param);
  }
  return 0;
}

void require_unit_range(const Integrand& f) {
  if (!f.unit_range())
    throw std::invalid_argument("censored estimators need f declared within [0,1]");
}

template <typename PerDraw>
void for_each_draw(const Partition& p, const StreamKey& key, PerDraw&& body) {
  int j = 0;
  for (int i = 0; i < p.size(); ++i)
    for (int rep = 0; rep < p.stratum(i).allocation; ++rep, ++j)
      body(i, j, key.draw(static_cast<std::uint64_t>(j)));
}

}  // namespace

const char* estimator_kind_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::sup: return "sup";
    case EstimatorKind::censored_sup: return "censored_sup";
    case EstimatorKind::integral: return "integral";
    case EstimatorKind::noisy_integral: return "noisy_integral";
    case EstimatorKind::censored_integral: return "censored_integral";
  }
  return "unknown";
}

EstimatorKind estimator_kind_from_name(const std::string& name) {
  for (EstimatorKind kind :
       {EstimatorKind::sup, EstimatorKind::censored_sup, EstimatorKind::integral,
        EstimatorKind::noisy_integral, EstimatorKind::censored_integral})
    if (name == estimator_kind_name(kind)) return kind;
  throw std::invalid_argument("unknown estimator kind: " + name);
}

Integrand::Integrand(PiecewiseConstantFn f)
    : piecewise_(std::make_shared<const PiecewiseConstantFn>(std::move(f))) {}

Integrand::Integrand(std::shared_ptr<FunctionOracle> oracle) : oracle_(std::move(oracle)) {
  if (!oracle_) throw std::invalid_argument("null oracle");
}

int Integrand::dimension() const {
  return piecewise_ ? piecewise_->dimension() : oracle_->dimension();
}

bool Integrand::unit_range() const {
  return piecewise_ ? piecewise_->unit_range_declared() : oracle_->unit_range();
}

double Integrand::value(const std::vector<double>& u) const {
  return piecewise_ ? piecewise_->eval(u) : (*oracle_)(u);
}

const PiecewiseConstantFn* Integrand::piecewise() const { return piecewise_.get(); }

double estimate_sup(const Integrand& f, const Partition& p, const StreamKey& key,
                    std::vector<DrawRecord>* records) {
  if (f.dimension() != p.dimension()) throw std::invalid_argument("dimension mismatch");
  double best = -std::numeric_limits<double>::infinity();
  for_each_draw(p, key, [&](int stratum, int j, const DrawStream& stream) {
    const auto point = sample_point(p.stratum(stratum), p.base(), stream);
    const double value = f.value(point);
    best = std::max(best, value);
    if (records) records->push_back({stratum, j, point, value, std::nullopt});
  });
  return best;
}

double estimate_sup_censored(const Integrand& f, const Partition& p, const StreamKey& key,
                             std::vector<DrawRecord>* records) {
  require_unit_range(f);
  if (f.dimension() != p.dimension()) throw std::invalid_argument("dimension mismatch");
  const unsigned threshold_slot = static_cast<unsigned>(p.dimension()) + 1;
  double best = 0;  // empty accepted set yields zero
  for_each_draw(p, key, [&](int stratum, int j, const DrawStream& stream) {
    const auto point = sample_point(p.stratum(stratum), p.base(), stream);
    const double threshold = stream.unit(threshold_slot);
    const bool below = threshold <= f.value(point);
    if (below) best = std::max(best, threshold);
    if (records)
      records->push_back(
          {stratum, j, point, DrawRecord::CensoredObs{threshold, below}, std::nullopt});
  });
  return best;
}

double estimate_integral(const Integrand& f, const Partition& p, const NoiseSpec& noise,
                         const StreamKey& key, std::vector<DrawRecord>* records) {
  if (f.dimension() != p.dimension()) throw std::invalid_argument("dimension mismatch");
  const unsigned noise_slot = static_cast<unsigned>(p.dimension()) + 2;
  double total = 0;
  for_each_draw(p, key, [&](int stratum, int j, const DrawStream& stream) {
    const auto point = sample_point(p.stratum(stratum), p.base(), stream);
    const double value = f.value(point);
    const double eps = noise_sample(noise, stream, noise_slot);
    total += value + eps;
    if (records) {
      DrawRecord record{stratum, j, point, value, std::nullopt};
      if (noise.kind != NoiseSpec::Kind::none) record.noise = eps;
      records->push_back(std::move(record));
    }
  });
  return total / p.total_samples();
}

double estimate_integral_censored(const Integrand& f, const Partition& p,
                                  const StreamKey& key, std::vector<DrawRecord>* records) {
  require_unit_range(f);
  if (f.dimension() != p.dimension()) throw std::invalid_argument("dimension mismatch");
  const unsigned threshold_slot = static_cast<unsigned>(p.dimension()) + 1;
  int accepted = 0;
  for_each_draw(p, key, [&](int stratum, int j, const DrawStream& stream) {
    const auto point = sample_point(p.stratum(stratum), p.base(), stream);
    const double threshold = stream.unit(threshold_slot);
    const bool below = threshold <= f.value(point);
    if (below) ++accepted;
    if (records)
      records->push_back(
          {stratum, j, point, DrawRecord::CensoredObs{threshold, below}, std::nullopt});
  });
  return static_cast<double>(accepted) / p.total_samples();
}

Replication replicate(EstimatorKind kind, const Integrand& f, const Partition& p,
                      const NoiseSpec& noise, std::uint64_t seed, int count,
                      bool retain_draws) {
  if (count < 1) throw std::invalid_argument("replicate count must be positive");
  if (kind == EstimatorKind::noisy_integral && noise.kind == NoiseSpec::Kind::none)
    throw std::invalid_argument("noisy integral needs a noise spec");
  if (kind == EstimatorKind::integral && noise.kind != NoiseSpec::Kind::none)
    kind = EstimatorKind::noisy_integral;

  Replication out;
  out.kind = kind;
  out.partition_digest = p.digest();
  out.seed = seed;
  out.values.resize(static_cast<size_t>(count));
  if (retain_draws) out.draws.resize(static_cast<size_t>(count));

  for (int r = 0; r < count; ++r) {
    const StreamKey key{seed, static_cast<std::uint64_t>(r)};
    std::vector<DrawRecord>* records = retain_draws ? &out.draws[static_cast<size_t>(r)] : nullptr;
    double value = 0;
    switch (kind) {
      case EstimatorKind::sup:
        value = estimate_sup(f, p, key, records);
        break;
      case EstimatorKind::censored_sup:
        value = estimate_sup_censored(f, p, key, records);
        break;
      case EstimatorKind::integral:
        value = estimate_integral(f, p, NoiseSpec::none(), key, records);
        break;
      case EstimatorKind::noisy_integral:
        value = estimate_integral(f, p, noise, key, records);
        break;
      case EstimatorKind::censored_integral:
        value = estimate_integral_censored(f, p, key, records);
        break;
    }
    out.values[static_cast<size_t>(r)] = value;
  }
  return out;
}

}  // namespace stratmc
