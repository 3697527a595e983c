#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "momab/config.hpp"
#include "momab/environment.hpp"
#include "momab/metrics.hpp"
#include "momab/policies.hpp"
#include "momab/reward_vector.hpp"

namespace momab {

// Environment resolved once per experiment and shared (read-only) by every run.
struct EnvironmentPlan {
  std::variant<StochasticSpec, AdversarySpec> spec;
  std::size_t arms = 0;
  std::size_t dims = 0;
  EnvironmentKind kind = EnvironmentKind::Stochastic;
  bool degenerate = false;  // every emitted vector has equal coordinates

  std::optional<std::vector<RewardVector>> means() const;
  Environment instantiate(std::size_t horizon, std::uint64_t seed) const;
};

EnvironmentPlan plan_environment(const ExperimentConfig& config);

std::unique_ptr<Policy> make_policy(const ExperimentConfig& config, std::size_t arms, std::size_t dims,
                                    bool bounded);

// Sorted, strictly increasing, ends at T: {2^k <= T} u {T/4, T/2, T} for "geometric",
// multiples of n plus T for "every:n".
std::vector<std::size_t> checkpoint_schedule(std::size_t horizon, const std::string& spec);

struct Checkpoint {
  std::size_t t = 0;
  double regret_general = 0.0;
  std::optional<double> regret_stochastic;
  std::vector<double> regret_dim;
  double attack_cost_cum = 0.0;
  std::vector<std::size_t> pulls;
  RewardVector played_sum;                    // sum_s r^{a_s,s}
  std::optional<RewardVector> played_mean_sum;  // sum_s mu^{a_s}
  std::vector<RewardVector> arm_sums;         // sum_s r^{i,s}
  std::vector<std::size_t> victim_pulls;      // pulls of the attacked learner
};

struct AttackStats {
  double total_cost = 0.0;
  double target_share = 0.0;        // of the player
  double victim_target_share = 0.0;
  std::vector<double> cost_per_arm;
  bool event_e = true;              // uniform concentration of the victim's estimates
  std::size_t event_e_failure = 0;
  bool e0 = true, e1 = true;        // end-of-run gamma-concentration events
  bool pull_cap_violated = false;   // some non-target arm above 2 + 9 sigma^2/Delta_0^2 ln t
  std::size_t worst_pull_excess_t = 0;
  bool cost_cap_ok = true;          // per-arm cost within max_j N_j (Delta_j + Delta_0 + 4 beta(N_j))
  bool counterfactual_ok = true;    // sum_t alphabar^{a_t} <= sum_t alpha
  std::optional<double> regret_def1, regret_def2;
  double target_distance = 0.0;     // dist(mu^K, O)
};

struct RunRecord {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  EnvironmentKind kind = EnvironmentKind::Stochastic;
  std::vector<Checkpoint> checkpoints;
  std::optional<AttackStats> attack;
  std::uint64_t action_digest = 0;  // FNV-1a of the pull sequence
  std::shared_ptr<const RegretLedger> ledger;  // only when requested

  const Checkpoint& final() const { return checkpoints.back(); }
};

RunRecord run_single(const ExperimentConfig& config, const EnvironmentPlan& plan, std::size_t run_id,
                     bool keep_ledger = false);

// Worker count: `requested` (0 = hardware concurrency) capped by MOMAB_WORKERS and by the
// number of replications.
std::size_t worker_count(std::size_t requested, std::size_t jobs);

// Runs replications 0..R-1 with seeds base_seed + run index; results ordered by run id.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, std::size_t workers = 0,
                                      bool keep_ledgers = false);

std::string csv_text(const std::vector<RunRecord>& records);
void write_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);
// key=value sidecar next to the CSV (path + ".meta") echoing every resolved parameter.
std::string metadata_text(const ExperimentConfig& config);
void write_metadata(const ExperimentConfig& config, const std::filesystem::path& csv_path);

}  // namespace momab
