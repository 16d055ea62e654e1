#include "stratmc/experiments.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "stratmc/random_instances.hpp"
#include "stratmc/serialize.hpp"

namespace stratmc {

namespace {

using nlohmann::json;

json instance_json(const PiecewiseConstantFn& f, const Partition& coarse,
                   const Partition& fine) {
  return json{{"f", to_json(f)}, {"coarse", to_json(coarse)}, {"fine", to_json(fine)}};
}

InstanceOptions options_for(TheoremId id) {
  InstanceOptions o;
  switch (id) {
    case TheoremId::sup_st:
    case TheoremId::noisy_variance:
      break;
    case TheoremId::censored_sup_st:
    case TheoremId::censored_integral_cx:
      o.unit_range = true;
      break;
    case TheoremId::monotone_univariate_cx:
      o.monotone_function = true;
      break;
    case TheoremId::monotone_multivariate_cx:
      o.dimension = 2;
      o.monotone_function = true;
      o.unit_range = true;
      o.max_samples = 8;
      o.max_splits = 4;
      o.max_cells_per_axis = 4;
      break;
  }
  return o;
}

}  // namespace

PiecewiseConstantFn counterexample_function() {
  return PiecewiseConstantFn::step_1d({Rational(1, 2), Rational(3, 4)},
                                      {Rational(4), Rational(2), Rational(6)});
}

Partition counterexample_coarse() { return coarsest_partition(2, BaseMeasure(1)); }

Partition counterexample_fine() {
  return finest_partition(2, BaseMeasure(1), {{Rational(1, 2)}});
}

PiecewiseConstantFn spike_function(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  const Rational half_cell = Rational(1) / (2 * n);
  if (n == 1)
    return PiecewiseConstantFn::step_1d({half_cell}, {Rational(1), Rational(-1)});
  return PiecewiseConstantFn::step_1d({half_cell, Rational(1) / n},
                                      {Rational(1), Rational(-1), Rational(0)});
}

Partition spike_finest_partition(int n) {
  std::vector<Rational> cuts;
  for (int i = 1; i < n; ++i) cuts.push_back(Rational(i) / n);
  return finest_partition(n, BaseMeasure(1), {cuts});
}

json ReproduceReport::to_json() const {
  auto dist_json = [](const DiscreteDist& d) {
    json support = json::array(), probs = json::array();
    for (const Rational& v : d.support()) support.push_back(to_string(v));
    for (const Rational& p : d.probs()) probs.push_back(to_string(p));
    return json{{"support", support}, {"probs", probs}};
  };
  json out{
      {"coarse_law", dist_json(coarse_law)},
      {"fine_law", dist_json(fine_law)},
      {"coarse_mean", to_string(coarse_mean)},
      {"fine_mean", to_string(fine_mean)},
      {"coarse_variance", to_string(coarse_variance)},
      {"fine_variance", to_string(fine_variance)},
      {"coarse_l1", to_string(coarse_l1)},
      {"fine_l1", to_string(fine_l1)},
      {"fine_cx_coarse", fine_cx_coarse.holds},
      {"coarse_cx_fine", coarse_cx_fine.holds},
      {"generalized",
       json{{"n", generalized.n},
            {"fine_variance", to_string(generalized.fine_variance)},
            {"coarse_variance", to_string(generalized.coarse_variance)},
            {"fine_l1", to_string(generalized.fine_l1)},
            {"coarse_l1", to_string(generalized.coarse_l1)},
            {"degenerate_equal", generalized.degenerate_equal}}}};
  if (fine_cx_coarse.witness) out["fine_cx_coarse_witness"] = to_string(*fine_cx_coarse.witness);
  if (coarse_cx_fine.witness) out["coarse_cx_fine_witness"] = to_string(*coarse_cx_fine.witness);
  return out;
}

std::string ReproduceReport::text() const {
  std::ostringstream os;
  auto dist_line = [&](const char* label, const DiscreteDist& d) {
    os << label << ": values (";
    for (size_t i = 0; i < d.size(); ++i) os << (i ? ", " : "") << to_string(d.support()[i]);
    os << ") with probabilities (";
    for (size_t i = 0; i < d.size(); ++i) os << (i ? ", " : "") << to_string(d.probs()[i]);
    os << ")\n";
  };
  dist_line("unstratified law", coarse_law);
  dist_line("stratified law  ", fine_law);
  os << "means: " << to_string(coarse_mean) << " and " << to_string(fine_mean) << "\n";
  os << "variances: " << to_string(coarse_variance) << " and " << to_string(fine_variance)
     << "\n";
  os << "L1 losses about the mean: " << to_string(coarse_l1) << " (unstratified) vs "
     << to_string(fine_l1) << " (stratified)\n";
  os << "stratified <=_cx unstratified: " << (fine_cx_coarse.holds ? "yes" : "no");
  if (fine_cx_coarse.witness) os << " (witness t = " << to_string(*fine_cx_coarse.witness) << ")";
  os << "\nunstratified <=_cx stratified: " << (coarse_cx_fine.holds ? "yes" : "no");
  if (coarse_cx_fine.witness) os << " (witness t = " << to_string(*coarse_cx_fine.witness) << ")";
  os << "\n";
  os << "spike example, n = " << generalized.n
     << ": variances " << to_string(generalized.fine_variance) << " (stratified) = "
     << to_string(generalized.coarse_variance) << " (unstratified)"
     << ", L1 " << to_string(generalized.fine_l1) << " (stratified) vs "
     << to_string(generalized.coarse_l1) << " (unstratified)";
  if (generalized.degenerate_equal) os << " [degenerate: losses coincide at n = 1]";
  os << "\n";
  return os.str();
}

ReproduceReport reproduce_example(int generalized_n) {
  const PiecewiseConstantFn f = counterexample_function();
  const Partition coarse = counterexample_coarse();
  const Partition fine = counterexample_fine();

  ReproduceReport report;
  report.coarse_law = dist_integral(f, coarse);
  report.fine_law = dist_integral(f, fine);
  report.coarse_mean = report.coarse_law.mean();
  report.fine_mean = report.fine_law.mean();
  report.coarse_variance = report.coarse_law.variance();
  report.fine_variance = report.fine_law.variance();
  report.coarse_l1 = lp_loss(report.coarse_law, report.coarse_mean, 1);
  report.fine_l1 = lp_loss(report.fine_law, report.fine_mean, 1);
  report.fine_cx_coarse = dominates_cx(report.fine_law, report.coarse_law);
  report.coarse_cx_fine = dominates_cx(report.coarse_law, report.fine_law);

  const PiecewiseConstantFn spike = spike_function(generalized_n);
  const Partition spike_fine = spike_finest_partition(generalized_n);
  const Partition spike_coarse = coarsest_partition(generalized_n, BaseMeasure(1));
  const DiscreteDist fine_law = dist_integral(spike, spike_fine);
  const DiscreteDist coarse_law = dist_integral(spike, spike_coarse);
  report.generalized.n = generalized_n;
  report.generalized.fine_variance = fine_law.variance();
  report.generalized.coarse_variance = coarse_law.variance();
  report.generalized.fine_l1 = lp_loss(fine_law, 0, 1);
  report.generalized.coarse_l1 = lp_loss(coarse_law, 0, 1);
  report.generalized.degenerate_equal =
      report.generalized.fine_l1 == report.generalized.coarse_l1;
  return report;
}

TheoremId theorem_from_selector(const std::string& selector) {
  if (selector == "3.1") return TheoremId::sup_st;
  if (selector == "3.2") return TheoremId::censored_sup_st;
  if (selector == "4.1") return TheoremId::noisy_variance;
  if (selector == "4.3") return TheoremId::censored_integral_cx;
  if (selector == "4.5") return TheoremId::monotone_univariate_cx;
  if (selector == "4.7") return TheoremId::monotone_multivariate_cx;
  throw std::invalid_argument("unknown theorem selector: " + selector);
}

const char* theorem_selector(TheoremId id) {
  switch (id) {
    case TheoremId::sup_st: return "3.1";
    case TheoremId::censored_sup_st: return "3.2";
    case TheoremId::noisy_variance: return "4.1";
    case TheoremId::censored_integral_cx: return "4.3";
    case TheoremId::monotone_univariate_cx: return "4.5";
    case TheoremId::monotone_multivariate_cx: return "4.7";
  }
  return "?";
}

json VerifyReport::to_json() const {
  json detail_json = json::array();
  for (const auto& t : detail) {
    json entry{{"pass", t.pass}, {"precondition_violated", t.precondition_violated}};
    if (!t.instance.is_null()) entry["instance"] = t.instance;
    detail_json.push_back(std::move(entry));
  }
  return json{{"theorem", theorem_selector(theorem)},
              {"trials", trials},
              {"passes", passes},
              {"failures", failures},
              {"precondition_violations", precondition_violations},
              {"detail", std::move(detail_json)}};
}

VerifyReport verify(const VerifyConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be positive");
  InstanceGenerator gen(config.seed, options_for(config.theorem));

  VerifyReport report;
  report.theorem = config.theorem;
  report.trials = config.trials;

  for (int trial = 0; trial < config.trials; ++trial) {
    const PiecewiseConstantFn f = config.inject_nonmonotone ? counterexample_function()
                                                            : gen.random_function();
    // With injection the first trial pins the canonical coarsest/finest pair,
    // the known failing instance; later trials draw random pairs.
    RefinedPair pair =
        (config.inject_nonmonotone && trial == 0)
            ? RefinedPair{counterexample_coarse(), counterexample_fine(),
                          refinement_witness(counterexample_coarse(), counterexample_fine())}
            : gen.random_refined_pair();
    const Partition& coarse = pair.coarse;
    const Partition& fine = pair.fine;

    VerifyTrial outcome;
    bool relation_holds = true;
    switch (config.theorem) {
      case TheoremId::sup_st:
        relation_holds = dominates_st(dist_sup(f, coarse), dist_sup(f, fine));
        break;
      case TheoremId::censored_sup_st:
        relation_holds =
            dominates_st_cdf(cdf_sup_censored(f, coarse), cdf_sup_censored(f, fine));
        break;
      case TheoremId::noisy_variance: {
        for (const Rational& sigma2 : config.noise_variances) {
          const NoiseSpec noise =
              sigma2 == 0 ? NoiseSpec::none() : NoiseSpec::gaussian(sigma2);
          const Rational var_fine = variance_integral_noisy(f, fine, noise);
          const Rational var_coarse = variance_integral_noisy(f, coarse, noise);
          if (var_fine > var_coarse) relation_holds = false;
          if (sigma2 == 0) {
            if (var_fine != dist_integral(f, fine).variance()) relation_holds = false;
            if (var_coarse != dist_integral(f, coarse).variance()) relation_holds = false;
          }
        }
        break;
      }
      case TheoremId::censored_integral_cx:
        relation_holds = dominates_cx(dist_integral_censored(f, fine),
                                      dist_integral_censored(f, coarse))
                             .holds;
        break;
      case TheoremId::monotone_univariate_cx:
      case TheoremId::monotone_multivariate_cx:
        relation_holds =
            dominates_cx(dist_integral(f, fine), dist_integral(f, coarse)).holds;
        break;
    }

    outcome.pass = relation_holds;
    if (!relation_holds &&
        (config.theorem == TheoremId::monotone_univariate_cx ||
         config.theorem == TheoremId::monotone_multivariate_cx) &&
        !is_monotone(f)) {
      // The hypothesis, not the theorem, failed for this instance.
      outcome.precondition_violated = true;
      report.precondition_violations += 1;
    }

    if (outcome.pass) {
      report.passes += 1;
    } else if (!outcome.precondition_violated) {
      report.failures += 1;
    }

    if (!outcome.pass || config.retain_instances) {
      outcome.instance = instance_json(f, coarse, fine);
      report.detail.push_back(std::move(outcome));
    }
  }
  return report;
}

SimulateConfig simulate_config_from_json(const nlohmann::json& j) {
  SimulateConfig config;
  config.alpha = j.value("alpha", 0.01);
  for (const auto& job_json : j.at("jobs")) {
    SimulateJob job{
        job_json.at("name").get<std::string>(),
        estimator_kind_from_name(job_json.at("estimator").get<std::string>()),
        function_from_json(job_json.at("f")),
        partition_from_json(job_json.at("partition")),
        job_json.contains("noise") ? noise_from_json(job_json.at("noise")) : NoiseSpec::none(),
        job_json.value("seed", std::uint64_t{0}),
        job_json.value("replicates", 1000)};
    config.jobs.push_back(std::move(job));
  }
  return config;
}

std::vector<SimulateJobResult> simulate(const SimulateConfig& config) {
  std::vector<SimulateJobResult> results;
  for (const SimulateJob& job : config.jobs) {
    SimulateJobResult result;
    result.name = job.name;
    result.replication = replicate(job.kind, Integrand(job.function), job.partition,
                                   job.noise, job.seed, job.replicates);

    const bool sup_kind =
        job.kind == EstimatorKind::sup || job.kind == EstimatorKind::censored_sup;
    result.target = sup_kind ? job.function.ess_sup()
                             : global_mean(job.function, job.partition.base());
    const double target = to_double(result.target);

    double sum = 0, sum_sq = 0, abs_err = 0, sq_err = 0;
    for (double v : result.replication.values) {
      sum += v;
      sum_sq += v * v;
      abs_err += std::abs(v - target);
      sq_err += (v - target) * (v - target);
    }
    const double count = static_cast<double>(result.replication.values.size());
    result.empirical_mean = sum / count;
    result.empirical_variance = sum_sq / count - result.empirical_mean * result.empirical_mean;
    result.empirical_l1 = abs_err / count;
    result.empirical_l2 = sq_err / count;

    switch (result.replication.kind) {
      case EstimatorKind::sup:
        result.dkw = dkw_validate(result.replication, cdf_view(dist_sup(job.function, job.partition)),
                                  config.alpha);
        break;
      case EstimatorKind::censored_sup:
        result.dkw = dkw_validate(result.replication,
                                  cdf_view(cdf_sup_censored(job.function, job.partition)),
                                  config.alpha);
        break;
      case EstimatorKind::integral:
        result.dkw = dkw_validate(result.replication,
                                  cdf_view(dist_integral(job.function, job.partition)),
                                  config.alpha);
        break;
      case EstimatorKind::censored_integral:
        result.dkw = dkw_validate(result.replication,
                                  cdf_view(dist_integral_censored(job.function, job.partition)),
                                  config.alpha);
        break;
      case EstimatorKind::noisy_integral:
        break;  // no exact law for the noisy case
    }

    result.summary = json{{"name", result.name},
                          {"kind", estimator_kind_name(result.replication.kind)},
                          {"replicates", result.replication.values.size()},
                          {"seed", result.replication.seed},
                          {"partition_id", result.replication.partition_digest},
                          {"target", to_string(result.target)},
                          {"empirical_mean", result.empirical_mean},
                          {"empirical_variance", result.empirical_variance},
                          {"empirical_l1", result.empirical_l1},
                          {"empirical_l2", result.empirical_l2}};
    if (result.dkw) {
      result.summary["dkw"] = json{{"sup_discrepancy", result.dkw->sup_discrepancy},
                                   {"band", result.dkw->band},
                                   {"pass", result.dkw->pass}};
    }
    results.push_back(std::move(result));
  }
  return results;
}

nlohmann::json plot_data(const SimulateJob& job) {
  json points = json::array();
  auto add = [&points](double t, double F) { points.push_back(json::array({t, F})); };
  switch (job.kind) {
    case EstimatorKind::sup:
    case EstimatorKind::integral:
    case EstimatorKind::censored_integral: {
      const DiscreteDist law =
          job.kind == EstimatorKind::sup
              ? dist_sup(job.function, job.partition)
              : (job.kind == EstimatorKind::integral
                     ? dist_integral(job.function, job.partition)
                     : dist_integral_censored(job.function, job.partition));
      Rational run = 0;
      for (size_t i = 0; i < law.size(); ++i) {
        run += law.probs()[i];
        add(to_double(law.support()[i]), to_double(run));
      }
      break;
    }
    case EstimatorKind::censored_sup: {
      const CensoredSupCdf cdf = cdf_sup_censored(job.function, job.partition);
      const int per_segment = 32;
      const auto& breaks = cdf.breakpoints();
      for (size_t s = 0; s < breaks.size(); ++s) {
        add(to_double(breaks[s]), to_double(cdf.value(breaks[s])));
        if (s + 1 == breaks.size()) break;
        for (int g = 1; g <= per_segment; ++g) {
          const Rational t = breaks[s] + (breaks[s + 1] - breaks[s]) * g / (per_segment + 1);
          add(to_double(t), to_double(cdf.value(t)));
        }
      }
      break;
    }
    case EstimatorKind::noisy_integral:
      throw std::invalid_argument("no exact law for the noisy integral estimate");
  }
  return json{{"name", job.name}, {"points", std::move(points)}};
}

}  // namespace stratmc
