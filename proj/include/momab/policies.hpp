#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "momab/pareto.hpp"
#include "momab/random.hpp"
#include "momab/reward_vector.hpp"

namespace momab {

using ParameterList = std::vector<std::pair<std::string, std::string>>;

// ---------------------------------------------------------------------------
// Single-objective learners

// UCB1: pull every arm once, then argmax_i mean_i + sqrt(2 ln t / N_i). Ties go to the
// lowest arm index. Deterministic given the reward stream.
class ScalarUcb {
 public:
  explicit ScalarUcb(std::size_t arms, bool bounded = true);

  std::size_t arms() const noexcept { return counts_.size(); }
  std::size_t steps() const noexcept { return steps_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  const std::vector<double>& sums() const noexcept { return sums_; }

  // Arm for step steps()+1.
  std::size_t select() const;
  double index(std::size_t arm, std::size_t t) const;
  void update(std::size_t arm, double reward);

 private:
  std::vector<std::size_t> counts_;
  std::vector<double> sums_;
  std::size_t steps_ = 0;
  bool bounded_;
};

// EXP3.P with the high-probability tuning
//   gamma = min(3/5, 2 sqrt(3 K ln K / (5 T))), eta = gamma / (3K),
//   beta = sqrt(ln(K / delta) / (T K)),
// p_t(a) = (1 - gamma) w_a / sum w + gamma / K, w_a = exp(eta * G_a), and every arm's gain
// estimate grows by (x 1{a = a_t} + beta) / p_t(a).
class ScalarExp3p {
 public:
  struct Tuning {
    double gamma = 0.0;
    double eta = 0.0;
    double beta = 0.0;
  };
  static Tuning tune(std::size_t arms, std::size_t horizon, double delta);

  ScalarExp3p(std::size_t arms, std::optional<std::size_t> horizon, double delta = 0.01, bool bounded = true);

  std::size_t arms() const noexcept { return gains_.size(); }
  const Tuning& tuning() const;
  // Distribution for the next step.
  std::vector<double> probabilities() const;
  std::size_t select(Rng& rng);
  void update(std::size_t arm, double reward);

 private:
  std::vector<double> gains_;
  std::vector<double> last_probabilities_;
  std::optional<Tuning> tuning_;
  bool bounded_;
};

// ---------------------------------------------------------------------------
// Multi-objective policies; rewards are D-vectors, arms and dimensions are 0-based.

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::size_t select(Rng& rng) = 0;
  virtual void observe(std::size_t arm, std::span<const double> reward) = 0;
  virtual std::string name() const = 0;
  virtual ParameterList parameters() const { return {}; }
};

// MO-KS: UCB (s = 0, stochastic) or EXP3.P (s = 1, adversarial) along one fixed dimension.
class MoKsPolicy final : public Policy {
 public:
  MoKsPolicy(int s, std::size_t dimension, std::size_t arms, std::size_t dims,
             std::optional<std::size_t> horizon = {}, double delta = 0.01, bool bounded = true);

  std::size_t select(Rng& rng) override;
  void observe(std::size_t arm, std::span<const double> reward) override;
  std::string name() const override { return "mo_ks"; }
  ParameterList parameters() const override;

  int s() const noexcept { return s_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const ScalarUcb* ucb() const noexcept { return std::get_if<ScalarUcb>(&inner_); }
  const ScalarExp3p* exp3p() const noexcept { return std::get_if<ScalarExp3p>(&inner_); }

 private:
  int s_;
  std::size_t dimension_;
  std::size_t dims_;
  std::variant<ScalarUcb, ScalarExp3p> inner_;
};

// MO-US: anytime EXP3++-style learner along one dimension with gap-estimate exploration.
class MoUsPolicy final : public Policy {
 public:
  struct Step {
    std::size_t t = 0;
    double eta = 0.0;
    std::vector<double> ucb, lcb, gap, epsilon, rho, rho_tilde;
  };

  MoUsPolicy(std::size_t dimension, std::size_t arms, std::size_t dims, bool bounded = true, double c = 256.0,
             double alpha = 3.0);

  std::size_t select(Rng& rng) override;
  void observe(std::size_t arm, std::span<const double> reward) override;
  std::string name() const override { return "mo_us"; }
  ParameterList parameters() const override;

  // eta_t = 1/2 sqrt(ln K / (t K))
  static double learning_rate(std::size_t t, std::size_t arms);
  // Sampling distribution the learner would use at step t > K.
  Step distribution(std::size_t t) const;

  const Step& last_step() const noexcept { return last_; }
  const std::vector<double>& loss_estimates() const noexcept { return losses_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  std::size_t steps() const noexcept { return steps_; }

 private:
  std::size_t dimension_;
  std::size_t dims_;
  bool bounded_;
  double c_;
  double alpha_;
  std::vector<double> losses_;  // importance-weighted cumulative losses
  std::vector<std::size_t> counts_;
  std::size_t steps_ = 0;
  Step last_;
};

enum class RadiusKind { ThreeSigma, Drugan };

RadiusKind parse_radius_kind(const std::string& name);
std::string to_string(RadiusKind kind);

// Per-arm empirical means and Pareto UCB index vectors; no randomness, so an attacker
// fed the same observations reproduces the exact same fronts.
class ParetoUcbIndex {
 public:
  ParetoUcbIndex(std::size_t arms, std::size_t dims, double sigma, RadiusKind radius = RadiusKind::ThreeSigma);

  std::size_t arms() const noexcept { return counts_.size(); }
  std::size_t dims() const noexcept { return dims_; }
  std::size_t steps() const noexcept { return steps_; }
  double sigma() const noexcept { return sigma_; }
  RadiusKind radius_kind() const noexcept { return radius_; }
  bool initialising() const noexcept;
  // First arm not pulled yet (valid while initialising()).
  std::size_t next_unpulled() const;

  double radius(std::size_t arm, std::size_t t) const;
  RewardVector mean(std::size_t arm) const;
  std::vector<RewardVector> index_vectors(std::size_t t) const;
  ParetoFront front(std::size_t t) const;
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }

  void update(std::size_t arm, std::span<const double> reward);

 private:
  std::size_t dims_;
  double sigma_;
  RadiusKind radius_;
  std::vector<std::size_t> counts_;
  std::vector<double> sums_;  // K x D
  std::size_t steps_ = 0;
};

// Pareto UCB: after one pull per arm, sample uniformly from the Pareto front of
// mean + radius * 1.
class ParetoUcbPolicy final : public Policy {
 public:
  ParetoUcbPolicy(std::size_t arms, std::size_t dims, double sigma, RadiusKind radius = RadiusKind::ThreeSigma);

  std::size_t select(Rng& rng) override;
  void observe(std::size_t arm, std::span<const double> reward) override;
  std::string name() const override { return "pareto_ucb"; }
  ParameterList parameters() const override;

  const ParetoUcbIndex& state() const noexcept { return state_; }
  // Front used by the last select(); empty during initialisation.
  const ParetoFront& last_front() const noexcept { return last_front_; }

 private:
  ParetoUcbIndex state_;
  ParetoFront last_front_;
};

// Plain single-objective learners run on one dimension of the reward vector.
class DimensionUcbPolicy final : public Policy {
 public:
  DimensionUcbPolicy(std::size_t dimension, std::size_t arms, std::size_t dims, bool bounded = true);
  std::size_t select(Rng&) override { return ucb_.select(); }
  void observe(std::size_t arm, std::span<const double> reward) override;
  std::string name() const override { return "ucb"; }
  ParameterList parameters() const override;
  const ScalarUcb& ucb() const noexcept { return ucb_; }

 private:
  std::size_t dimension_;
  std::size_t dims_;
  ScalarUcb ucb_;
};

class DimensionExp3pPolicy final : public Policy {
 public:
  DimensionExp3pPolicy(std::size_t dimension, std::size_t arms, std::size_t dims, std::optional<std::size_t> horizon,
                       double delta = 0.01, bool bounded = true);
  std::size_t select(Rng& rng) override { return exp3p_.select(rng); }
  void observe(std::size_t arm, std::span<const double> reward) override;
  std::string name() const override { return "exp3p"; }
  ParameterList parameters() const override;
  const ScalarExp3p& exp3p() const noexcept { return exp3p_; }

 private:
  std::size_t dimension_;
  std::size_t dims_;
  ScalarExp3p exp3p_;
};

}  // namespace momab
