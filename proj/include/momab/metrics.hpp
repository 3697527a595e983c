#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "momab/environment.hpp"
#include "momab/pareto.hpp"
#include "momab/reward_vector.hpp"

namespace momab {

// Everything that happened in one run: the full pre-attack reward tensor, the pulls, and
// the attack costs. Time is 1-based in the accessors.
class RegretLedger {
 public:
  RegretLedger(std::size_t arms, std::size_t dims, std::size_t horizon, EnvironmentKind kind,
               std::optional<std::vector<RewardVector>> means = {});

  std::size_t arms() const noexcept { return arms_; }
  std::size_t dims() const noexcept { return dims_; }
  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return pulls_.size(); }
  bool complete() const noexcept { return steps() == horizon_; }
  EnvironmentKind kind() const noexcept { return kind_; }
  const std::optional<std::vector<RewardVector>>& means() const noexcept { return means_; }
  std::size_t target() const noexcept { return arms_ - 1; }

  // `counterfactual` is either empty or one cost per arm.
  void record(const RewardMatrix& rewards, std::size_t arm, double alpha = 0.0,
              std::span<const double> counterfactual = {});

  std::span<const std::size_t> pulls() const noexcept { return pulls_; }
  double reward(std::size_t t, std::size_t arm, std::size_t d) const;
  std::span<const double> reward_row(std::size_t t, std::size_t arm) const;
  std::span<const double> alphas() const noexcept { return alphas_; }
  double counterfactual(std::size_t t, std::size_t arm) const;

 private:
  std::size_t arms_, dims_, horizon_;
  EnvironmentKind kind_;
  std::optional<std::vector<RewardVector>> means_;
  std::vector<std::size_t> pulls_;
  std::vector<double> rewards_;  // T x K x D
  std::vector<double> alphas_;
  std::vector<double> counterfactual_;  // T x K
};

// Sums over the first `t` steps of a ledger.
struct LedgerTotals {
  std::size_t t = 0;
  std::vector<RewardVector> arm_sums;     // sum_s r^{i,s}
  std::vector<RewardVector> pulled_sums;  // sum_{s: a_s = i} r^{i,s}
  RewardVector played_sum;                // sum_s r^{a_s,s}
  std::vector<std::size_t> counts;
  double cost = 0.0;
  std::vector<double> cost_per_arm;            // sum_{s: a_s = i} alpha_s
  std::vector<double> counterfactual_per_arm;  // sum_s alphabar_s^i
  double counterfactual_played = 0.0;          // sum_s alphabar_s^{a_s}

  LedgerTotals() = default;
  LedgerTotals(std::size_t arms, std::size_t dims);
  // Add one step; `counterfactual` is either empty or one cost per arm.
  void add(const RewardMatrix& rewards, std::size_t arm, double alpha = 0.0,
           std::span<const double> counterfactual = {});
};

// upto = 0 means the whole horizon and requires a complete ledger.
LedgerTotals totals(const RegretLedger& ledger, std::size_t upto = 0);

// dist(sum_t r^{a_t,t}, front{sum_t r^{i,t}})
double general_pareto_regret(const LedgerTotals& totals);
double general_pareto_regret(const RegretLedger& ledger, std::size_t upto = 0);

// max_i sum_t r_d^{i,t} - sum_t r_d^{a_t,t}, unclamped
double per_dimension_regret(const LedgerTotals& totals, std::size_t d);
double per_dimension_regret(const RegretLedger& ledger, std::size_t d, std::size_t upto = 0);

// sum_i N_i dist(mu^i, O) with O the front of the true means.
double stochastic_pareto_regret(const RegretLedger& ledger, std::size_t upto = 0);
// The same quantity summed step by step, sum_t dist(mu^{a_t}, O).
double stochastic_pareto_regret_stepwise(const RegretLedger& ledger, std::size_t upto = 0);
double stochastic_pareto_regret(std::span<const RewardVector> means, std::span<const std::size_t> counts);

struct PseudoRegret {
  double value = 0.0;
  std::size_t replications = 0;
  RewardVector expected_played;
  std::vector<double> per_dimension;
  std::vector<double> per_dimension_se;  // standard error of the per-dimension estimate
};

// Monte Carlo pseudo regret from per-run expected played sums (sum_t mu^{a_t} or, for a
// deterministic oblivious sequence, sum_t r^{a_t,t}) and the expected per-arm sums.
PseudoRegret pseudo_regret(std::span<const RewardVector> played, std::span<const RewardVector> expected_arm_sums);
PseudoRegret pareto_pseudo_regret(std::span<const RegretLedger> runs, std::size_t upto = 0);

struct PostAttackFronts {
  std::vector<RewardVector> expected_vectors;  // one per arm, their front is O-bar'
  std::vector<RewardVector> realized_vectors;  // one per arm, their front is O'
  ParetoFront expected;
  ParetoFront realized;
  RewardVector played;  // average post-attack reward of the played sequence
};

PostAttackFronts post_attack_fronts(const LedgerTotals& totals, std::span<const RewardVector> means, int definition);
PostAttackFronts post_attack_fronts(const RegretLedger& ledger, int definition, std::size_t upto = 0);
double post_attack_general_regret(const LedgerTotals& totals, std::span<const RewardVector> means, int definition);
// T * dist(played, O') for the chosen definition.
double post_attack_general_regret(const RegretLedger& ledger, int definition, std::size_t upto = 0);

struct AttackSummary {
  double total_cost = 0.0;
  std::vector<std::size_t> pulls;
  double target_share = 0.0;
  std::vector<double> cost_per_arm;
};

AttackSummary attack_summary(const LedgerTotals& totals, std::size_t target);
AttackSummary attack_summary(const RegretLedger& ledger, std::size_t upto = 0);

// Empirical concentration events at the end of a stochastic run:
// pulled - every pulled arm's sample mean is within gamma of mu^i in every coordinate,
// all_steps - (1/T) sum_t r^{i,t} is within gamma of mu^i for every arm.
struct ConcentrationEvents {
  bool pulled = false;
  bool all_steps = false;
};

ConcentrationEvents concentration_events(const LedgerTotals& totals, std::span<const RewardVector> means, double gamma);
ConcentrationEvents concentration_events(const RegretLedger& ledger, double gamma);

}  // namespace momab
