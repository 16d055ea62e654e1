#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stratmc/discrete_dist.hpp"
#include "stratmc/estimators.hpp"
#include "stratmc/exact_dist.hpp"
#include "stratmc/function_model.hpp"
#include "stratmc/measure_space.hpp"
#include "stratmc/orders.hpp"

namespace stratmc {

// The 4-2-6 step function with the coarsest/finest two-sample partitions:
// the stock counterexample showing refinement helps in L2 but not in L1.
PiecewiseConstantFn counterexample_function();
Partition counterexample_coarse();  // one stratum, n = 2
Partition counterexample_fine();    // split at 1/2, n = 2

// The +-1 spike function paired with the finest n-cell partition; the first
// cell carries +1 on its lower half and -1 on its upper half, zero elsewhere.
PiecewiseConstantFn spike_function(int n);
Partition spike_finest_partition(int n);

struct ReproduceReport {
  DiscreteDist coarse_law = DiscreteDist::point_mass(0);  // values 2..6, weights (1,4,6,4,1)/16
  DiscreteDist fine_law = DiscreteDist::point_mass(0);    // values {3,5} fair
  Rational coarse_mean, fine_mean;
  Rational coarse_variance, fine_variance;
  Rational coarse_l1, fine_l1;  // about the common mean
  OrderVerdict fine_cx_coarse;  // fine <=_cx coarse?
  OrderVerdict coarse_cx_fine;  // coarse <=_cx fine?

  struct Generalized {
    int n = 0;
    Rational fine_variance, coarse_variance;  // both 1/n^2
    Rational fine_l1;                          // 1/n
    Rational coarse_l1;                        // < 1/n for n >= 2
    bool degenerate_equal = false;             // n = 1 boundary
  };
  Generalized generalized;

  nlohmann::json to_json() const;
  std::string text() const;
};

ReproduceReport reproduce_example(int generalized_n = 5);

enum class TheoremId { sup_st, censored_sup_st, noisy_variance, censored_integral_cx,
                       monotone_univariate_cx, monotone_multivariate_cx };

TheoremId theorem_from_selector(const std::string& selector);  // "3.1" .. "4.7"
const char* theorem_selector(TheoremId id);

struct VerifyConfig {
  TheoremId theorem = TheoremId::sup_st;
  int trials = 100;
  std::uint64_t seed = 0;
  std::vector<Rational> noise_variances = {Rational(0), Rational(1, 4), Rational(1)};
  // Replaces the generated function by the non-monotone counterexample to
  // demonstrate the precondition's role in the monotone theorems.
  bool inject_nonmonotone = false;
  bool retain_instances = false;
};

struct VerifyTrial {
  bool pass = false;
  bool precondition_violated = false;
  nlohmann::json instance;  // populated for failures and retained trials
};

struct VerifyReport {
  TheoremId theorem;
  int trials = 0;
  int passes = 0;
  int failures = 0;
  int precondition_violations = 0;
  std::vector<VerifyTrial> detail;  // failures always; all trials when retained

  bool all_passed() const { return failures == 0; }
  nlohmann::json to_json() const;
};

VerifyReport verify(const VerifyConfig& config);

struct SimulateJob {
  std::string name;
  EstimatorKind kind = EstimatorKind::integral;
  PiecewiseConstantFn function;
  Partition partition;
  NoiseSpec noise;
  std::uint64_t seed = 0;
  int replicates = 1000;
};

struct SimulateJobResult {
  std::string name;
  Replication replication;
  double empirical_mean = 0;
  double empirical_variance = 0;
  double empirical_l1 = 0;       // about the exact target
  double empirical_l2 = 0;
  Rational target;               // global mean, or ess sup for sup kinds
  std::optional<DkwResult> dkw;  // present when an exact law exists
  nlohmann::json summary;
};

struct SimulateConfig {
  std::vector<SimulateJob> jobs;
  double alpha = 0.01;
};

SimulateConfig simulate_config_from_json(const nlohmann::json& j);

std::vector<SimulateJobResult> simulate(const SimulateConfig& config);

// (t, CDF) table for external plotting; exact laws only.
nlohmann::json plot_data(const SimulateJob& job);

}  // namespace stratmc
