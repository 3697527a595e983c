#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "momab/bounds.hpp"
#include "momab/config.hpp"
#include "momab/harness.hpp"
#include "momab/oracle.hpp"

namespace {

momab::ExperimentConfig configure(const std::string& path, std::optional<std::size_t> reps,
                                  std::optional<std::uint64_t> seed) {
  auto config = momab::load_config(path);
  if (reps) config.replications = *reps;
  if (seed) config.seed = *seed;
  momab::validate(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective bandit experiments"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "run an experiment and write the checkpoint CSV");
  run->add_option("--config", config_path, "experiment file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "output CSV")->required();
  run->add_option("--reps", reps, "override the number of replications");
  run->add_option("--seed", seed, "override the base seed");

  auto* check = app.add_subcommand("check", "run an experiment and report the applicable bounds");
  check->add_option("--config", config_path, "experiment file")->required()->check(CLI::ExistingFile);
  check->add_option("--reps", reps, "override the number of replications");
  check->add_option("--seed", seed, "override the base seed");

  std::uint64_t oracle_seed = 1;
  auto* oracle = app.add_subcommand("oracle", "compare the Pareto routines against brute-force references");
  oracle->add_option("--seed", oracle_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto config = configure(config_path, reps, seed);
      const auto records = momab::run_experiment(config);
      momab::write_csv(records, out_path);
      momab::write_metadata(config, out_path);
      std::cout << "wrote " << records.size() << " runs to " << out_path << '\n';
      return 0;
    }
    if (*check) {
      const auto config = configure(config_path, reps, seed);
      const auto records = momab::run_experiment(config);
      const auto report = momab::check_bounds(records, config);
      std::cout << "scenario " << report.scenario << ", " << records.size() << " runs, T = " << config.horizon
                << '\n';
      report.print(std::cout);
      return report.passed() ? 0 : 1;
    }
    if (*oracle) {
      const auto s = momab::run_oracle_suite(oracle_seed);
      std::printf("%s dist vs grid oracle: %zu pairs, max |error| %.3g (tolerance 1e-4), %.2f s\n",
                  s.dist_max_error <= 1e-4 ? "PASS" : "FAIL", s.dist_pairs, s.dist_max_error, s.dist_seconds);
      std::printf("%s pareto_front vs pairwise reference: %zu sets, %zu mismatches\n",
                  s.front_mismatches == 0 ? "PASS" : "FAIL", s.front_sets, s.front_mismatches);
      return s.passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "momab: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
