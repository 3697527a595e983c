#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "momab/environment.hpp"
#include "momab/pareto.hpp"
#include "momab/policies.hpp"
#include "momab/reward_vector.hpp"

namespace momab {

// Confidence radius sqrt(2 sigma^2 / n * ln(pi^2 K n^2 / (3 delta))).
double beta(std::size_t n, double sigma, std::size_t arms, double delta);

struct AttackParams {
  double delta0 = 0.1;  // margin pushed below the target
  double delta = 0.05;
  double sigma = 0.1;
};

// Attack on a scalar UCB player along one dimension. The target is the last arm.
// Alice replays Bob's UCB on the attacked stream, so she knows a_t before Bob pulls.
class UcbAttacker {
 public:
  UcbAttacker(std::size_t arms, std::size_t dims, std::size_t dimension, AttackParams params);

  std::size_t arms() const noexcept { return counts_.size(); }
  std::size_t target() const noexcept { return arms() - 1; }
  const AttackParams& params() const noexcept { return params_; }

  // Bob's next arm according to Alice's replica.
  std::size_t predict() const { return replica_.select(); }
  // Cost for step t given the arm Bob pulled and its pre-attack reward vector. Throws
  // std::logic_error if Bob's arm disagrees with the replica.
  double attack(std::size_t t, std::size_t bob_arm, std::span<const double> reward) const;
  void observe(std::size_t arm, std::span<const double> reward, double alpha);

  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  const std::vector<double>& cost_per_arm() const noexcept { return costs_; }
  double total_cost() const noexcept { return total_; }

 private:
  std::size_t dims_;
  std::size_t dimension_;
  AttackParams params_;
  ScalarUcb replica_;
  std::vector<std::size_t> counts_;
  std::vector<double> sums_;   // pre-attack, dimension d' only
  std::vector<double> costs_;  // cumulative alpha charged per arm
  double total_ = 0.0;
};

// Attack on a Pareto UCB player. Alice recomputes Bob's front from the attacked stream
// and charges max_j of the costs that would bring each front arm's post-attack mean
// below mu_hat^K - (2 beta(N_K) + Delta_0) * 1.
class ParetoUcbAttacker {
 public:
  struct Outcome {
    double alpha = 0.0;
    std::vector<double> counterfactual;  // per arm, 0 outside the front
    ParetoFront front;                   // empty during initialisation
    bool target_in_front = false;
  };

  // `index_sigma` is the victim's index scale when it differs from params.sigma.
  ParetoUcbAttacker(std::size_t arms, std::size_t dims, AttackParams params,
                    RadiusKind radius = RadiusKind::ThreeSigma, std::optional<double> index_sigma = {});

  std::size_t arms() const noexcept { return counts_.size(); }
  std::size_t dims() const noexcept { return dims_; }
  std::size_t target() const noexcept { return arms() - 1; }
  const AttackParams& params() const noexcept { return params_; }

  // Front Bob uses at step t (t = steps() + 1), empty while some arm is unpulled.
  ParetoFront front(std::size_t t) const;
  // Per-arm costs for the front arms at step t; `rewards` are the pre-attack rewards
  // (only rows of front arms are read).
  std::vector<double> counterfactual_costs(const ParetoFront& front, const RewardMatrix& rewards) const;
  Outcome attack(std::size_t t, const RewardMatrix& rewards) const;
  void observe(std::size_t arm, std::span<const double> reward, double alpha);

  std::size_t steps() const noexcept { return replica_.steps(); }
  const ParetoUcbIndex& replica() const noexcept { return replica_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  RewardVector raw_mean(std::size_t arm) const;
  const std::vector<double>& cost_per_arm() const noexcept { return costs_; }
  double total_cost() const noexcept { return total_; }

 private:
  std::size_t dims_;
  AttackParams params_;
  ParetoUcbIndex replica_;
  std::vector<std::size_t> counts_;
  std::vector<double> sums_;  // pre-attack, K x D
  std::vector<double> costs_;
  double total_ = 0.0;
};

// Tracks the uniform concentration event ||mu_hat^i(t) - mu^i||_inf < beta(N_i(t)) for all
// arms and all t > K on the raw (pre-attack) observations.
class ConcentrationMonitor {
 public:
  ConcentrationMonitor(std::vector<RewardVector> means, double sigma, double delta);

  void observe(std::size_t arm, std::span<const double> reward);
  bool held() const noexcept { return held_; }
  // First step at which the event failed, 0 if it still holds.
  std::size_t first_failure() const noexcept { return failure_; }

 private:
  bool arm_within(std::size_t arm) const;

  std::vector<RewardVector> means_;
  double sigma_, delta_;
  std::vector<std::size_t> counts_;
  std::vector<RewardVector> sums_;
  std::size_t steps_ = 0;
  bool armed_ = false;
  bool held_ = true;
  std::size_t failure_ = 0;
};

}  // namespace momab
