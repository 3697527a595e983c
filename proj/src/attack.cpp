#include "momab/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace momab {

double beta(std::size_t n, double sigma, std::size_t arms, double delta) {
  if (n < 1) throw std::invalid_argument("beta: n must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("beta: delta must lie in (0, 1)");
  if (sigma < 0.0) throw std::invalid_argument("beta: sigma must be non-negative");
  if (sigma == 0.0) return 0.0;
  const double nd = static_cast<double>(n);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return std::sqrt(2.0 * sigma * sigma / nd * std::log(pi2 * static_cast<double>(arms) * nd * nd / (3.0 * delta)));
}

namespace {

void check_params(const AttackParams& p, std::size_t arms) {
  if (arms < 2) throw std::invalid_argument("attack: need a target and at least one other arm");
  if (!(p.delta0 > 0.0)) throw std::invalid_argument("attack: Delta_0 must be positive");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw std::invalid_argument("attack: delta must lie in (0, 1)");
  if (!(p.sigma >= 0.0)) throw std::invalid_argument("attack: sigma must be non-negative");
}

}  // namespace

// ---------------------------------------------------------------------------

UcbAttacker::UcbAttacker(std::size_t arms, std::size_t dims, std::size_t dimension, AttackParams params)
    : dims_(dims),
      dimension_(dimension),
      params_(params),
      replica_(arms, /*bounded=*/false),
      counts_(arms, 0),
      sums_(arms, 0.0),
      costs_(arms, 0.0) {
  check_params(params, arms);
  if (dimension >= dims) throw std::invalid_argument("attack_ucb: dimension out of range");
}

double UcbAttacker::attack(std::size_t t, std::size_t bob_arm, std::span<const double> reward) const {
  if (reward.size() != dims_) throw std::invalid_argument("attack_ucb: reward vector has the wrong dimension");
  if (bob_arm != predict()) throw std::logic_error("attack_ucb: replica diverged from the player's choice");
  if (bob_arm == target() || t <= 2 * arms()) return 0.0;
  const std::size_t k = target();
  const double nk = static_cast<double>(counts_[k]);
  const double zbar = sums_[k] / nk - 2.0 * beta(counts_[k], params_.sigma, arms(), params_.delta) - params_.delta0;
  // choose alpha so that the post-attack mean of bob_arm after this pull is at most zbar
  const double n_next = static_cast<double>(counts_[bob_arm] + 1);
  const double attacked_sum = sums_[bob_arm] - costs_[bob_arm] + reward[dimension_];
  return std::max(0.0, attacked_sum - n_next * zbar);
}

void UcbAttacker::observe(std::size_t arm, std::span<const double> reward, double alpha) {
  if (arm >= arms()) throw std::out_of_range("attack_ucb: arm index out of range");
  if (alpha < 0.0) throw std::invalid_argument("attack_ucb: negative cost");
  const double x = reward[dimension_];
  replica_.update(arm, x - alpha);
  ++counts_[arm];
  sums_[arm] += x;
  costs_[arm] += alpha;
  total_ += alpha;
}

// ---------------------------------------------------------------------------

ParetoUcbAttacker::ParetoUcbAttacker(std::size_t arms, std::size_t dims, AttackParams params, RadiusKind radius,
                                     std::optional<double> index_sigma)
    : dims_(dims),
      params_(params),
      replica_(arms, dims, index_sigma.value_or(params.sigma), radius),
      counts_(arms, 0),
      sums_(arms * dims, 0.0),
      costs_(arms, 0.0) {
  check_params(params, arms);
}

ParetoFront ParetoUcbAttacker::front(std::size_t t) const {
  if (replica_.initialising()) return {};
  return replica_.front(t);
}

RewardVector ParetoUcbAttacker::raw_mean(std::size_t arm) const {
  RewardVector m(dims_);
  if (counts_.at(arm) == 0) return m;
  for (std::size_t d = 0; d < dims_; ++d) m[d] = sums_[arm * dims_ + d] / static_cast<double>(counts_[arm]);
  return m;
}

std::vector<double> ParetoUcbAttacker::counterfactual_costs(const ParetoFront& front,
                                                            const RewardMatrix& rewards) const {
  if (front.empty()) throw std::logic_error("attack_pareto_ucb: empty front");
  if (rewards.arms() != arms() || rewards.dims() != dims_)
    throw std::invalid_argument("attack_pareto_ucb: reward matrix has the wrong shape");
  const std::size_t k = target();
  if (counts_[k] == 0) throw std::logic_error("attack_pareto_ucb: target not pulled yet");
  const double shift = 2.0 * beta(counts_[k], params_.sigma, arms(), params_.delta) + params_.delta0;
  std::vector<double> zbar(dims_);
  for (std::size_t d = 0; d < dims_; ++d) zbar[d] = sums_[k * dims_ + d] / static_cast<double>(counts_[k]) - shift;

  std::vector<double> out(arms(), 0.0);
  for (const auto& m : front.members()) {
    const std::size_t j = m.index;
    if (j == k) continue;
    const double n_next = static_cast<double>(counts_[j] + 1);
    double worst = 0.0;
    for (std::size_t d = 0; d < dims_; ++d) {
      // N_j(t) * (zhat_d - zbar_d) with zhat the post-attack mean after a counterfactual pull of j
      const double attacked_sum = sums_[j * dims_ + d] - costs_[j] + rewards(j, d);
      worst = std::max(worst, attacked_sum - n_next * zbar[d]);
    }
    out[j] = worst;
  }
  return out;
}

ParetoUcbAttacker::Outcome ParetoUcbAttacker::attack(std::size_t t, const RewardMatrix& rewards) const {
  if (t != steps() + 1) throw std::logic_error("attack_pareto_ucb: step out of sequence");
  Outcome out;
  out.counterfactual.assign(arms(), 0.0);
  out.front = front(t);
  if (out.front.empty()) return out;
  out.target_in_front = out.front.contains(target());
  if (out.target_in_front || t <= 2 * arms()) return out;
  out.counterfactual = counterfactual_costs(out.front, rewards);
  out.alpha = *std::max_element(out.counterfactual.begin(), out.counterfactual.end());
  return out;
}

void ParetoUcbAttacker::observe(std::size_t arm, std::span<const double> reward, double alpha) {
  if (arm >= arms()) throw std::out_of_range("attack_pareto_ucb: arm index out of range");
  if (reward.size() != dims_) throw std::invalid_argument("attack_pareto_ucb: reward vector has the wrong dimension");
  if (alpha < 0.0) throw std::invalid_argument("attack_pareto_ucb: negative cost");
  RewardVector received(reward);
  received -= RewardVector::ones(dims_, alpha);
  replica_.update(arm, received.view());
  for (std::size_t d = 0; d < dims_; ++d) sums_[arm * dims_ + d] += reward[d];
  ++counts_[arm];
  costs_[arm] += alpha;
  total_ += alpha;
}

// ---------------------------------------------------------------------------

ConcentrationMonitor::ConcentrationMonitor(std::vector<RewardVector> means, double sigma, double delta)
    : means_(std::move(means)), sigma_(sigma), delta_(delta), counts_(means_.size(), 0) {
  if (means_.empty()) throw std::invalid_argument("ConcentrationMonitor: no arms");
  for (const auto& m : means_) sums_.emplace_back(m.size());
}

bool ConcentrationMonitor::arm_within(std::size_t arm) const {
  const double radius = beta(counts_[arm], sigma_, means_.size(), delta_);
  const double n = static_cast<double>(counts_[arm]);
  for (std::size_t d = 0; d < means_[arm].size(); ++d)
    if (!(std::abs(sums_[arm][d] / n - means_[arm][d]) < radius)) return false;
  return true;
}

void ConcentrationMonitor::observe(std::size_t arm, std::span<const double> reward) {
  if (arm >= means_.size()) throw std::out_of_range("ConcentrationMonitor: arm index out of range");
  sums_[arm] += reward;
  ++counts_[arm];
  ++steps_;
  if (!held_) return;
  // Only the pulled arm's estimate moves, so once every arm has a sample it is enough to
  // inspect that arm; the first time all arms are covered, inspect them all.
  bool ok = true;
  if (!armed_) {
    if (std::find(counts_.begin(), counts_.end(), 0) != counts_.end()) return;
    armed_ = true;
    for (std::size_t i = 0; i < means_.size() && ok; ++i) ok = arm_within(i);
  } else {
    ok = arm_within(arm);
  }
  if (!ok) {
    held_ = false;
    failure_ = steps_ + 1;
  }
}

}  // namespace momab
