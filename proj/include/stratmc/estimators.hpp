#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stratmc/function_model.hpp"
#include "stratmc/measure_space.hpp"
#include "stratmc/rng.hpp"

namespace stratmc {

enum class EstimatorKind { sup, censored_sup, integral, noisy_integral, censored_integral };

const char* estimator_kind_name(EstimatorKind kind);
EstimatorKind estimator_kind_from_name(const std::string& name);

// Integrand handle for the sampling path: either an owned piecewise-constant
// function or a shared black-box oracle.
class Integrand {
 public:
  /* implicit */ Integrand(PiecewiseConstantFn f);
  explicit Integrand(std::shared_ptr<FunctionOracle> oracle);

  int dimension() const;
  bool unit_range() const;
  double value(const std::vector<double>& u) const;

  // Non-null only for the piecewise-constant case.
  const PiecewiseConstantFn* piecewise() const;

 private:
  std::shared_ptr<const PiecewiseConstantFn> piecewise_;
  std::shared_ptr<FunctionOracle> oracle_;
};

// Full provenance of one stratified draw. Censored modes never store the
// function value, only the threshold and the comparison outcome.
struct DrawRecord {
  struct CensoredObs {
    double threshold = 0;  // T_j
    bool below = false;    // T_j <= f(V_j)
  };

  int stratum = 0;
  int sample_index = 0;           // j within {0..n-1}
  std::vector<double> point;      // V_j, post quantile transform
  std::variant<double, CensoredObs> payload;
  std::optional<double> noise;    // noisy integral mode only
};

// Root of the deterministic stream tree: every uniform consumed is addressed
// by (seed, replicate, draw, slot), so replications are bit-identical however
// the work is scheduled.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  DrawStream draw(std::uint64_t draw_index) const {
    return DrawStream(seed, replicate, draw_index);
  }
};

double estimate_sup(const Integrand& f, const Partition& p, const StreamKey& key,
                    std::vector<DrawRecord>* records = nullptr);
double estimate_sup_censored(const Integrand& f, const Partition& p, const StreamKey& key,
                             std::vector<DrawRecord>* records = nullptr);
double estimate_integral(const Integrand& f, const Partition& p, const NoiseSpec& noise,
                         const StreamKey& key, std::vector<DrawRecord>* records = nullptr);
double estimate_integral_censored(const Integrand& f, const Partition& p,
                                  const StreamKey& key,
                                  std::vector<DrawRecord>* records = nullptr);

// Seeded batch of independent realizations, replicate r on substream (seed, r).
struct Replication {
  EstimatorKind kind = EstimatorKind::sup;
  std::string partition_digest;
  std::uint64_t seed = 0;
  std::vector<double> values;
  std::vector<std::vector<DrawRecord>> draws;  // populated only when retained
};

Replication replicate(EstimatorKind kind, const Integrand& f, const Partition& p,
                      const NoiseSpec& noise, std::uint64_t seed, int count,
                      bool retain_draws = false);

}  // namespace stratmc
