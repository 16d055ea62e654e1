// Batch experiment runner over the stratified-sampling library: exact
// counterexample reporting, randomized theorem-verification sweeps, and
// seeded simulation with CSV/JSON outputs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stratmc/experiments.hpp"
#include "stratmc/serialize.hpp"

namespace {

using nlohmann::json;

int run_reproduce(int generalized_n, const std::string& json_path) {
  const stratmc::ReproduceReport report = stratmc::reproduce_example(generalized_n);
  std::cout << report.text();
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << report.to_json().dump(2) << '\n';
  }
  return 0;
}

int run_verify(const std::string& theorem, int trials, std::uint64_t seed,
               const std::string& sigma2_csv, bool inject_nonmonotone,
               const std::string& out_path) {
  stratmc::VerifyConfig config;
  config.theorem = stratmc::theorem_from_selector(theorem);
  config.trials = trials;
  config.seed = seed;
  config.inject_nonmonotone = inject_nonmonotone;
  if (!sigma2_csv.empty()) {
    config.noise_variances.clear();
    std::stringstream ss(sigma2_csv);
    std::string item;
    while (std::getline(ss, item, ','))
      config.noise_variances.push_back(stratmc::parse_rational(item));
  }

  const stratmc::VerifyReport report = stratmc::verify(config);
  std::cout << "theorem " << stratmc::theorem_selector(report.theorem) << ": "
            << report.passes << "/" << report.trials << " trials passed";
  if (report.precondition_violations > 0)
    std::cout << " (" << report.precondition_violations
              << " precondition violations, not counted as failures)";
  std::cout << '\n';
  for (const auto& t : report.detail) {
    if (t.pass) continue;
    if (t.precondition_violated)
      std::cout << "precondition violation (non-monotone f):\n";
    else
      std::cout << "COUNTEREXAMPLE FOUND:\n";
    std::cout << t.instance.dump(2) << '\n';
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << report.to_json().dump(2) << '\n';
  }
  return report.all_passed() ? 0 : 1;
}

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 bool emit_plot_data) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open config: " << config_path << '\n';
    return 2;
  }
  json config_json;
  in >> config_json;
  const stratmc::SimulateConfig config = stratmc::simulate_config_from_json(config_json);

  std::filesystem::create_directories(out_dir);
  const auto results = stratmc::simulate(config);

  bool dkw_failed = false;
  json summary = json::array();
  for (size_t i = 0; i < results.size(); ++i) {
    const auto& result = results[i];
    const auto base = std::filesystem::path(out_dir) / result.name;
    {
      std::ofstream csv(base.string() + "_values.csv");
      stratmc::write_replication_csv(csv, result.replication);
    }
    {
      std::ofstream meta(base.string() + "_meta.json");
      meta << stratmc::replication_metadata(result.replication,
                                            config.jobs[i].partition.total_samples(),
                                            config.jobs[i].noise)
                  .dump(2)
           << '\n';
    }
    if (emit_plot_data &&
        config.jobs[i].kind != stratmc::EstimatorKind::noisy_integral) {
      std::ofstream plot(base.string() + "_cdf.csv");
      plot << "t,cdf\n";
      for (const auto& point : stratmc::plot_data(config.jobs[i]).at("points"))
        plot << point[0].get<double>() << ',' << point[1].get<double>() << '\n';
    }
    summary.push_back(result.summary);
    std::cout << result.summary.dump() << '\n';
    if (result.dkw && !result.dkw->pass) dkw_failed = true;
  }
  std::ofstream sum_out(std::filesystem::path(out_dir) / "summary.json");
  sum_out << summary.dump(2) << '\n';
  return dkw_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratified Monte Carlo estimators: exact laws, order checks, simulation"};
  app.require_subcommand(1);

  int generalized_n = 5;
  std::string reproduce_json;
  auto* reproduce = app.add_subcommand(
      "reproduce", "exact counterexample report: refinement helps in L2 but not in L1");
  reproduce->add_option("--n", generalized_n, "sample size for the spike example")
      ->check(CLI::PositiveNumber);
  reproduce->add_option("--json", reproduce_json, "also write the report as JSON");

  std::string theorem;
  int trials = 100;
  std::uint64_t seed = 0;
  std::string sigma2_csv;
  bool inject_nonmonotone = false;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "randomized exact verification sweep");
  verify->add_option("--theorem", theorem, "one of 3.1, 3.2, 4.1, 4.3, 4.5, 4.7")->required();
  verify->add_option("--trials", trials, "number of random instances")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "generator seed")->required();
  verify->add_option("--sigma2", sigma2_csv, "comma-separated noise variances (theorem 4.1)");
  verify->add_flag("--inject-nonmonotone", inject_nonmonotone,
                   "replace f by the non-monotone counterexample (theorem 4.5)");
  verify->add_option("--out", verify_out, "write the report as JSON");

  std::string config_path;
  std::string out_dir = "simulate_out";
  bool emit_plot_data = false;
  auto* simulate = app.add_subcommand("simulate", "seeded replication runs from a JSON config");
  simulate->add_option("--config", config_path, "job config JSON")->required();
  simulate->add_option("--out-dir", out_dir, "output directory");
  simulate->add_flag("--emit-plot-data", emit_plot_data, "write (t, CDF) tables for plotting");

  CLI11_PARSE(app, argc, argv);

  try {
    if (reproduce->parsed()) return run_reproduce(generalized_n, reproduce_json);
    if (verify->parsed())
      return run_verify(theorem, trials, seed, sigma2_csv, inject_nonmonotone, verify_out);
    if (simulate->parsed()) return run_simulate(config_path, out_dir, emit_plot_data);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
