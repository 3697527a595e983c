#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "momab/config.hpp"
#include "momab/harness.hpp"
#include "momab/metrics.hpp"

namespace momab {

struct CriterionResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct BoundReport {
  std::string scenario;
  std::vector<CriterionResult> results;

  bool passed() const;
  void print(std::ostream& out) const;
};

// Monte Carlo pseudo regret at checkpoint time t across replications; throws for
// adaptive runs or when t is not a checkpoint of every run.
PseudoRegret pseudo_regret_at(const std::vector<RunRecord>& records, std::size_t t,
                              const std::optional<std::vector<RewardVector>>& means);

// R'_T <= min_d R_T^d + 1e-9 on every run, and the Monte Carlo version with 3 standard errors.
CriterionResult check_sandwich(const std::vector<RunRecord>& records,
                               const std::optional<std::vector<RewardVector>>& means);
// R'_T == R_T^d for every d to 1e-9 on every run.
CriterionResult check_degenerate_collapse(const std::vector<RunRecord>& records);
// pseudo regret at T over pseudo regret at T/2 <= limit
CriterionResult check_log_growth(const std::vector<RunRecord>& records,
                                 const std::optional<std::vector<RewardVector>>& means, double limit);
// mean R'_T / sqrt(T K ln K) <= scale_limit and mean R'_T / mean R'_{T/4} <= ratio_limit
CriterionResult check_sqrt_growth(const std::vector<RunRecord>& records, double scale_limit = 10.0,
                                  double ratio_limit = 2.3);

// explicit cost constant (K-1)(2 + 9 sigma^2/Delta_0^2 ln T)(max_i(Delta_i + Delta_0) + 4 beta(2))
double attack_cost_bound(const ExperimentConfig& config, const std::vector<RewardVector>& means);

CriterionResult check_pull_cap(const std::vector<RunRecord>& records, const ExperimentConfig& config,
                               std::size_t dims);
CriterionResult check_attack_cost(const std::vector<RunRecord>& records, const ExperimentConfig& config,
                                  const std::vector<RewardVector>& means);
CriterionResult check_linear_regret(const std::vector<RunRecord>& records, const std::vector<RewardVector>& means);
CriterionResult check_post_attack_regret(const std::vector<RunRecord>& records, const ExperimentConfig& config,
                                         const std::vector<RewardVector>& means);
CriterionResult check_robustness(const std::vector<RunRecord>& records, const std::vector<RewardVector>& means);

// Every criterion applicable to the config's scenario.
BoundReport check_bounds(const std::vector<RunRecord>& records, const ExperimentConfig& config);

}  // namespace momab
