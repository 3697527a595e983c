#include "momab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace momab {

RegretLedger::RegretLedger(std::size_t arms, std::size_t dims, std::size_t horizon, EnvironmentKind kind,
                           std::optional<std::vector<RewardVector>> means)
    : arms_(arms), dims_(dims), horizon_(horizon), kind_(kind), means_(std::move(means)) {
  if (arms == 0 || dims == 0 || horizon == 0) throw std::invalid_argument("RegretLedger: empty shape");
  if (kind == EnvironmentKind::Stochastic && !means_)
    throw std::invalid_argument("RegretLedger: stochastic runs need the true means");
  if (means_) {
    if (means_->size() != arms) throw std::invalid_argument("RegretLedger: one mean vector per arm expected");
    for (const auto& m : *means_)
      if (m.size() != dims) throw std::invalid_argument("RegretLedger: mean vector has the wrong dimension");
  }
  pulls_.reserve(horizon);
  rewards_.reserve(horizon * arms * dims);
  alphas_.reserve(horizon);
  counterfactual_.reserve(horizon * arms);
}

void RegretLedger::record(const RewardMatrix& rewards, std::size_t arm, double alpha,
                          std::span<const double> counterfactual) {
  if (complete()) throw std::logic_error("RegretLedger: horizon exceeded");
  if (rewards.arms() != arms_ || rewards.dims() != dims_)
    throw std::invalid_argument("RegretLedger: reward matrix has the wrong shape");
  if (arm >= arms_) throw std::out_of_range("RegretLedger: arm index out of range");
  if (!counterfactual.empty() && counterfactual.size() != arms_)
    throw std::invalid_argument("RegretLedger: one counterfactual cost per arm expected");
  pulls_.push_back(arm);
  rewards_.insert(rewards_.end(), rewards.flat().begin(), rewards.flat().end());
  alphas_.push_back(alpha);
  if (counterfactual.empty())
    counterfactual_.insert(counterfactual_.end(), arms_, 0.0);
  else
    counterfactual_.insert(counterfactual_.end(), counterfactual.begin(), counterfactual.end());
}

double RegretLedger::reward(std::size_t t, std::size_t arm, std::size_t d) const {
  if (t < 1 || t > steps() || arm >= arms_ || d >= dims_) throw std::out_of_range("RegretLedger::reward");
  return rewards_[((t - 1) * arms_ + arm) * dims_ + d];
}

std::span<const double> RegretLedger::reward_row(std::size_t t, std::size_t arm) const {
  if (t < 1 || t > steps() || arm >= arms_) throw std::out_of_range("RegretLedger::reward_row");
  return {rewards_.data() + ((t - 1) * arms_ + arm) * dims_, dims_};
}

double RegretLedger::counterfactual(std::size_t t, std::size_t arm) const {
  if (t < 1 || t > steps() || arm >= arms_) throw std::out_of_range("RegretLedger::counterfactual");
  return counterfactual_[(t - 1) * arms_ + arm];
}

// ---------------------------------------------------------------------------

namespace {

std::size_t resolve(const RegretLedger& ledger, std::size_t upto) {
  if (upto == 0) {
    if (!ledger.complete()) throw std::logic_error("metrics: ledger is incomplete");
    return ledger.horizon();
  }
  if (upto > ledger.steps()) throw std::out_of_range("metrics: prefix longer than the recorded run");
  return upto;
}

const std::vector<RewardVector>& true_means(const RegretLedger& ledger) {
  if (ledger.kind() != EnvironmentKind::Stochastic || !ledger.means())
    throw std::logic_error("metrics: quantity defined for stochastic runs only");
  return *ledger.means();
}

}  // namespace

LedgerTotals::LedgerTotals(std::size_t arms, std::size_t dims)
    : arm_sums(arms, RewardVector(dims)),
      pulled_sums(arms, RewardVector(dims)),
      played_sum(dims),
      counts(arms, 0),
      cost_per_arm(arms, 0.0),
      counterfactual_per_arm(arms, 0.0) {}

void LedgerTotals::add(const RewardMatrix& rewards, std::size_t arm, double alpha,
                       std::span<const double> counterfactual) {
  const std::size_t k = arm_sums.size();
  if (rewards.arms() != k || rewards.dims() != played_sum.size())
    throw std::invalid_argument("LedgerTotals: reward matrix has the wrong shape");
  if (arm >= k) throw std::out_of_range("LedgerTotals: arm index out of range");
  for (std::size_t i = 0; i < k; ++i) arm_sums[i] += rewards.row(i);
  if (!counterfactual.empty()) {
    if (counterfactual.size() != k) throw std::invalid_argument("LedgerTotals: one counterfactual cost per arm expected");
    for (std::size_t i = 0; i < k; ++i) counterfactual_per_arm[i] += counterfactual[i];
    counterfactual_played += counterfactual[arm];
  }
  pulled_sums[arm] += rewards.row(arm);
  played_sum += rewards.row(arm);
  ++counts[arm];
  cost += alpha;
  cost_per_arm[arm] += alpha;
  ++t;
}

LedgerTotals totals(const RegretLedger& ledger, std::size_t upto) {
  const std::size_t t_end = resolve(ledger, upto);
  const std::size_t k = ledger.arms(), dims = ledger.dims();
  LedgerTotals out(k, dims);
  std::vector<double> cf(k);
  RewardMatrix m(k, dims);
  for (std::size_t t = 1; t <= t_end; ++t) {
    for (std::size_t i = 0; i < k; ++i) {
      std::copy_n(ledger.reward_row(t, i).begin(), dims, m.row(i).begin());
      cf[i] = ledger.counterfactual(t, i);
    }
    out.add(m, ledger.pulls()[t - 1], ledger.alphas()[t - 1], cf);
  }
  return out;
}

double general_pareto_regret(const LedgerTotals& totals) {
  return dist(totals.played_sum, pareto_front(totals.arm_sums));
}

double general_pareto_regret(const RegretLedger& ledger, std::size_t upto) {
  return general_pareto_regret(totals(ledger, upto));
}

double per_dimension_regret(const LedgerTotals& totals, std::size_t d) {
  if (d >= totals.played_sum.size()) throw std::out_of_range("per_dimension_regret: dimension out of range");
  double best = totals.arm_sums.front()[d];
  for (const auto& s : totals.arm_sums) best = std::max(best, s[d]);
  return best - totals.played_sum[d];
}

double per_dimension_regret(const RegretLedger& ledger, std::size_t d, std::size_t upto) {
  if (d >= ledger.dims()) throw std::out_of_range("per_dimension_regret: dimension out of range");
  return per_dimension_regret(totals(ledger, upto), d);
}

double stochastic_pareto_regret(std::span<const RewardVector> means, std::span<const std::size_t> counts) {
  if (means.size() != counts.size()) throw std::invalid_argument("stochastic_pareto_regret: shape mismatch");
  const ParetoFront front = pareto_front(means);
  double total = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i)
    if (counts[i] > 0) total += static_cast<double>(counts[i]) * dist(means[i], front);
  return total;
}

double stochastic_pareto_regret(const RegretLedger& ledger, std::size_t upto) {
  const auto& means = true_means(ledger);
  const std::size_t t_end = resolve(ledger, upto);
  std::vector<std::size_t> counts(ledger.arms(), 0);
  for (std::size_t t = 0; t < t_end; ++t) ++counts[ledger.pulls()[t]];
  return stochastic_pareto_regret(means, counts);
}

double stochastic_pareto_regret_stepwise(const RegretLedger& ledger, std::size_t upto) {
  const auto& means = true_means(ledger);
  const std::size_t t_end = resolve(ledger, upto);
  const ParetoFront front = pareto_front(means);
  double total = 0.0;
  for (std::size_t t = 0; t < t_end; ++t) total += dist(means[ledger.pulls()[t]], front);
  return total;
}

// ---------------------------------------------------------------------------

PseudoRegret pseudo_regret(std::span<const RewardVector> played, std::span<const RewardVector> expected_arm_sums) {
  if (played.empty()) throw std::invalid_argument("pseudo_regret: no replications");
  if (expected_arm_sums.empty()) throw std::invalid_argument("pseudo_regret: no arms");
  const std::size_t dims = expected_arm_sums.front().size();
  const double n = static_cast<double>(played.size());

  PseudoRegret out;
  out.replications = played.size();
  out.expected_played = RewardVector(dims);
  for (const auto& p : played) out.expected_played += p;
  out.expected_played *= 1.0 / n;
  out.value = dist(out.expected_played, pareto_front(expected_arm_sums));

  out.per_dimension.resize(dims);
  out.per_dimension_se.resize(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    double best = expected_arm_sums.front()[d];
    for (const auto& s : expected_arm_sums) best = std::max(best, s[d]);
    out.per_dimension[d] = best - out.expected_played[d];
    double ss = 0.0;
    for (const auto& p : played) ss += (p[d] - out.expected_played[d]) * (p[d] - out.expected_played[d]);
    out.per_dimension_se[d] = played.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  }
  return out;
}

PseudoRegret pareto_pseudo_regret(std::span<const RegretLedger> runs, std::size_t upto) {
  if (runs.empty()) throw std::invalid_argument("pareto_pseudo_regret: no replications");
  const EnvironmentKind kind = runs.front().kind();
  if (kind == EnvironmentKind::Adaptive)
    throw std::logic_error("pareto_pseudo_regret: undefined for adaptive adversaries");

  std::vector<RewardVector> played;
  std::vector<RewardVector> expected;
  for (const auto& run : runs) {
    if (run.kind() != kind) throw std::invalid_argument("pareto_pseudo_regret: mixed environment kinds");
    const LedgerTotals tot = totals(run, upto);
    if (kind == EnvironmentKind::Stochastic) {
      const auto& means = true_means(run);
      RewardVector p(run.dims());
      for (std::size_t i = 0; i < run.arms(); ++i) p += means[i] * static_cast<double>(tot.counts[i]);
      played.push_back(std::move(p));
      if (expected.empty())
        for (const auto& m : means) expected.push_back(m * static_cast<double>(tot.t));
    } else {
      played.push_back(tot.played_sum);
      if (expected.empty())
        expected = tot.arm_sums;
      else if (expected != tot.arm_sums)
        throw std::invalid_argument("pareto_pseudo_regret: replications disagree on the oblivious sequence");
    }
  }
  return pseudo_regret(played, expected);
}

// ---------------------------------------------------------------------------

PostAttackFronts post_attack_fronts(const LedgerTotals& tot, std::span<const RewardVector> means, int definition) {
  if (definition != 1 && definition != 2) throw std::invalid_argument("post_attack_fronts: definition is 1 or 2");
  const std::size_t k = tot.counts.size();
  if (means.size() != k) throw std::invalid_argument("post_attack_fronts: one mean vector per arm expected");
  if (tot.t == 0) throw std::invalid_argument("post_attack_fronts: empty run");
  const double t = static_cast<double>(tot.t);

  PostAttackFronts out;
  if (definition == 1) {
    std::size_t others = 0;
    double cost_on_others = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      others += tot.counts[i];
      cost_on_others += tot.cost_per_arm[i];
    }
    if (others == 0) throw std::domain_error("post_attack_fronts: no pulls of non-target arms");
    const double avg = cost_on_others / static_cast<double>(others);
    for (std::size_t i = 0; i < k; ++i) {
      out.expected_vectors.push_back(means[i].shifted(-avg));
      const double own = tot.counts[i] > 0 ? tot.cost_per_arm[i] / static_cast<double>(tot.counts[i]) : 0.0;
      out.realized_vectors.push_back((tot.arm_sums[i] * (1.0 / t)).shifted(-own));
    }
    out.played = (tot.played_sum * (1.0 / t)).shifted(-avg);
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      const double avg = tot.counterfactual_per_arm[i] / t;
      out.expected_vectors.push_back(means[i].shifted(-avg));
      out.realized_vectors.push_back((tot.arm_sums[i] * (1.0 / t)).shifted(-avg));
    }
    out.played = (tot.played_sum * (1.0 / t)).shifted(-tot.counterfactual_played / t);
  }
  out.expected = pareto_front(out.expected_vectors);
  out.realized = pareto_front(out.realized_vectors);
  return out;
}

PostAttackFronts post_attack_fronts(const RegretLedger& ledger, int definition, std::size_t upto) {
  const auto& means = true_means(ledger);
  return post_attack_fronts(totals(ledger, upto), means, definition);
}

double post_attack_general_regret(const LedgerTotals& tot, std::span<const RewardVector> means, int definition) {
  const PostAttackFronts f = post_attack_fronts(tot, means, definition);
  return static_cast<double>(tot.t) * dist(f.played, f.realized);
}

double post_attack_general_regret(const RegretLedger& ledger, int definition, std::size_t upto) {
  const auto& means = true_means(ledger);
  return post_attack_general_regret(totals(ledger, upto), means, definition);
}

AttackSummary attack_summary(const LedgerTotals& tot, std::size_t target) {
  if (target >= tot.counts.size()) throw std::out_of_range("attack_summary: target out of range");
  AttackSummary out;
  out.total_cost = tot.cost;
  out.pulls = tot.counts;
  out.cost_per_arm = tot.cost_per_arm;
  out.target_share = tot.t > 0 ? static_cast<double>(tot.counts[target]) / static_cast<double>(tot.t) : 0.0;
  return out;
}

AttackSummary attack_summary(const RegretLedger& ledger, std::size_t upto) {
  return attack_summary(totals(ledger, upto), ledger.target());
}

ConcentrationEvents concentration_events(const LedgerTotals& tot, std::span<const RewardVector> means, double gamma) {
  const std::size_t k = tot.counts.size();
  if (means.size() != k) throw std::invalid_argument("concentration_events: one mean vector per arm expected");
  if (tot.t == 0) throw std::invalid_argument("concentration_events: empty run");
  ConcentrationEvents ev{true, true};
  const double t = static_cast<double>(tot.t);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t d = 0; d < means[i].size(); ++d) {
      if (tot.counts[i] > 0 &&
          !(std::abs(tot.pulled_sums[i][d] / static_cast<double>(tot.counts[i]) - means[i][d]) <= gamma))
        ev.pulled = false;
      if (!(std::abs(tot.arm_sums[i][d] / t - means[i][d]) <= gamma)) ev.all_steps = false;
    }
  return ev;
}

ConcentrationEvents concentration_events(const RegretLedger& ledger, double gamma) {
  const auto& means = true_means(ledger);
  return concentration_events(totals(ledger), means, gamma);
}

}  // namespace momab
