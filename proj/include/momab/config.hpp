#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "momab/environment.hpp"
#include "momab/policies.hpp"
#include "momab/reward_vector.hpp"

namespace momab {

// Arms and dimensions are 1-based in config files and 0-based in these structs.

struct EnvironmentConfig {
  // stochastic | gap | constant_mean | bernoulli_degenerate | oblivious_csv | least_pulled
  std::string kind = "stochastic";
  std::vector<RewardVector> means;  // stochastic
  std::vector<double> scalars;      // constant_mean means, bernoulli_degenerate probabilities
  std::size_t arms = 0;             // gap
  std::size_t dims = 0;             // gap, constant_mean, bernoulli_degenerate, least_pulled
  double gamma = 0.1;               // gap
  std::optional<double> margin;     // gap
  double top = 0.9, spread = 0.1;   // gap
  NoiseKind noise = NoiseKind::TruncatedGaussian;
  double sigma = 0.1;
  std::uint64_t fixture_seed = 7;   // bernoulli_degenerate
  std::filesystem::path path;       // oblivious_csv
  double high = 1.0, low = 0.3;     // least_pulled
};

struct PolicyConfig {
  std::string kind = "mo_ks";  // mo_ks | mo_us | pareto_ucb | ucb | exp3p
  int s = 0;
  std::size_t dimension = 0;
  RadiusKind radius = RadiusKind::ThreeSigma;
  std::optional<double> sigma;  // Pareto UCB radius scale, defaults to the environment's
  double delta = 0.01;          // EXP3.P
};

struct AttackConfig {
  bool enabled = false;
  std::string kind = "pareto_ucb";  // pareto_ucb | ucb
  double delta0 = 0.1;
  double delta = 0.05;
  std::optional<double> sigma;
  std::string victim = "player";  // player | shadow
  std::size_t dimension = 0;      // attacked dimension for the ucb attack
};

struct ExperimentConfig {
  std::string scenario = "stochastic_log";
  std::size_t horizon = 1000;
  std::size_t replications = 1;
  std::uint64_t seed = 1;
  std::string checkpoints = "geometric";  // geometric | every:<n>
  EnvironmentConfig environment;
  PolicyConfig policy;
  AttackConfig attack;

  double policy_sigma() const { return policy.sigma.value_or(environment.sigma); }
  double attack_sigma() const { return attack.sigma.value_or(environment.sigma); }
};

const std::vector<std::string>& known_scenarios();

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Checks everything that does not require building the environment; sizes are checked
// again once the environment is built.
void validate(const ExperimentConfig& config);
void validate(const ExperimentConfig& config, std::size_t arms, std::size_t dims);

// Every resolved parameter as (key, value), 1-based where indices appear.
std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& config);

}  // namespace momab
