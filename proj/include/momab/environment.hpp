#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "momab/random.hpp"
#include "momab/reward_vector.hpp"

namespace momab {

// Rewards of all K arms at one step, row-major K x D.
class RewardMatrix {
 public:
  RewardMatrix() = default;
  RewardMatrix(std::size_t arms, std::size_t dims, double fill = 0.0)
      : arms_(arms), dims_(dims), data_(arms * dims, fill) {}

  std::size_t arms() const noexcept { return arms_; }
  std::size_t dims() const noexcept { return dims_; }

  std::span<const double> row(std::size_t arm) const { return {data_.data() + arm * dims_, dims_}; }
  std::span<double> row(std::size_t arm) { return {data_.data() + arm * dims_, dims_}; }
  double operator()(std::size_t arm, std::size_t d) const { return data_[arm * dims_ + d]; }
  double& operator()(std::size_t arm, std::size_t d) { return data_[arm * dims_ + d]; }

  std::span<const double> flat() const noexcept { return data_; }
  friend bool operator==(const RewardMatrix&, const RewardMatrix&) = default;

 private:
  std::size_t arms_ = 0;
  std::size_t dims_ = 0;
  std::vector<double> data_;
};

enum class NoiseKind { TruncatedGaussian, Gaussian, BernoulliPerDim };

NoiseKind parse_noise_kind(const std::string& name);
std::string to_string(NoiseKind kind);

struct StochasticSpec {
  std::vector<RewardVector> means;  // K x D, each coordinate in [0, 1]
  NoiseKind noise = NoiseKind::TruncatedGaussian;
  double sigma = 0.1;

  std::size_t arms() const noexcept { return means.size(); }
  std::size_t dims() const noexcept { return means.empty() ? 0 : means.front().size(); }
  void validate() const;
};

// Deterministic oblivious reward sequence, T x K x D, stored t-major.
class ObliviousSequence {
 public:
  ObliviousSequence(std::size_t horizon, std::size_t arms, std::size_t dims);

  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t arms() const noexcept { return arms_; }
  std::size_t dims() const noexcept { return dims_; }

  // t is 1-based
  double& at(std::size_t t, std::size_t arm, std::size_t d);
  double at(std::size_t t, std::size_t arm, std::size_t d) const;
  RewardMatrix matrix(std::size_t t) const;

 private:
  std::size_t index(std::size_t t, std::size_t arm, std::size_t d) const;

  std::size_t horizon_, arms_, dims_;
  std::vector<double> data_;
};

// Reward generator that sees the player's past pulls (and nothing else).
using AdaptiveGenerator =
    std::function<RewardMatrix(std::size_t t, std::span<const std::size_t> past_pulls)>;

struct AdaptiveAdversary {
  std::size_t arms = 0;
  std::size_t dims = 0;
  AdaptiveGenerator generate;
};

struct AdversarySpec {
  std::variant<ObliviousSequence, AdaptiveAdversary> source;

  std::size_t arms() const;
  std::size_t dims() const;
  bool oblivious() const noexcept { return std::holds_alternative<ObliviousSequence>(source); }
};

enum class EnvironmentKind { Stochastic, Oblivious, Adaptive };

class Environment {
 public:
  Environment(StochasticSpec spec, std::size_t horizon, std::uint64_t seed);
  Environment(AdversarySpec spec, std::size_t horizon);

  std::size_t arms() const noexcept { return arms_; }
  std::size_t dims() const noexcept { return dims_; }
  std::size_t horizon() const noexcept { return horizon_; }
  EnvironmentKind kind() const noexcept;
  // Whether every emitted reward is guaranteed to lie in [0, 1]^D.
  bool bounded() const noexcept;

  // True per-arm means; only for stochastic environments.
  std::optional<std::vector<RewardVector>> means() const;

  // Full K x D reward matrix at step t (1-based); `past_pulls` holds a_1..a_{t-1}.
  const RewardMatrix& step(std::size_t t, std::span<const std::size_t> past_pulls = {});

 private:
  std::variant<StochasticSpec, AdversarySpec> spec_;
  std::size_t arms_ = 0;
  std::size_t dims_ = 0;
  std::size_t horizon_ = 0;
  Rng rng_;
  RewardMatrix current_;
};

// CSV tensor with header `t,arm,dim,value`; t, arm and dim are 1-based.
ObliviousSequence load_oblivious_csv(const std::filesystem::path& path);
void save_oblivious_csv(const ObliviousSequence& sequence, const std::filesystem::path& path);

// Oblivious instance with every coordinate equal to the scalar base reward.
// base is T x K with values in [0, 1].
AdversarySpec make_degenerate(const std::vector<std::vector<double>>& base, std::size_t dims);

// Stochastic instance with mean vectors means[i] * 1 and independent per-dimension noise.
StochasticSpec make_constant_mean_degenerate(std::span<const double> means, std::size_t dims,
                                             double sigma,
                                             NoiseKind noise = NoiseKind::TruncatedGaussian);

struct GapInstance {
  StochasticSpec spec;
  double gamma = 0.0;
  double margin = 0.0;
  // Delta_i = max_d (mu^i_d - mu^K_d), zero for the target arm.
  std::vector<double> deltas;
};

// Arms 0..K-2 are mutually incomparable (a trade-off between the first two dimensions,
// `spread` apart, starting from `top`); the last arm sits `margin` below the
// coordinate-wise minimum of the others, so it is dominated by every other arm with
// margin >= 5 gamma.
GapInstance make_gap_instance(std::size_t arms, std::size_t dims, double gamma, double sigma,
                              NoiseKind noise = NoiseKind::Gaussian, std::optional<double> margin = {},
                              double top = 0.9, double spread = 0.1);

// Oblivious degenerate sequence with base rewards drawn once as Bernoulli(p_i) from a
// fixture seed, so the same sequence is replayed in every replication.
AdversarySpec make_bernoulli_degenerate(std::span<const double> probabilities, std::size_t horizon,
                                        std::size_t dims, std::uint64_t fixture_seed);

// Adaptive adversary: the arm pulled least so far pays `high`, every other arm pays `low`
// in every dimension.
AdversarySpec make_least_pulled_adversary(std::size_t arms, std::size_t dims, double high = 1.0,
                                          double low = 0.3);

}  // namespace momab
