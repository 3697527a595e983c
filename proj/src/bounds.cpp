#include "momab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "momab/attack.hpp"
#include "momab/pareto.hpp"

namespace momab {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

const Checkpoint& at_time(const RunRecord& r, std::size_t t) {
  for (const auto& cp : r.checkpoints)
    if (cp.t == t) return cp;
  throw std::invalid_argument("bounds: t = " + std::to_string(t) + " is not a checkpoint");
}

void require_records(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("check_bounds: empty record set");
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::size_t horizon_of(const std::vector<RunRecord>& records) { return records.front().final().t; }

double target_distance(const std::vector<RewardVector>& means) {
  return dist(means.back(), pareto_front(means));
}

}  // namespace

bool BoundReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

void BoundReport::print(std::ostream& out) const {
  for (const auto& r : results)
    out << (r.pass ? "PASS " : "FAIL ") << r.name << ": measured " << num(r.measured) << " vs threshold "
        << num(r.threshold) << (r.detail.empty() ? "" : " (" + r.detail + ")") << '\n';
}

PseudoRegret pseudo_regret_at(const std::vector<RunRecord>& records, std::size_t t,
                              const std::optional<std::vector<RewardVector>>& means) {
  require_records(records);
  const EnvironmentKind kind = records.front().kind;
  if (kind == EnvironmentKind::Adaptive) throw std::logic_error("pseudo regret: undefined for adaptive adversaries");
  std::vector<RewardVector> played;
  std::vector<RewardVector> expected;
  for (const auto& r : records) {
    const Checkpoint& cp = at_time(r, t);
    if (kind == EnvironmentKind::Stochastic) {
      if (!means || !cp.played_mean_sum) throw std::logic_error("pseudo regret: stochastic runs need means");
      played.push_back(*cp.played_mean_sum);
    } else {
      played.push_back(cp.played_sum);
      if (!expected.empty() && expected != cp.arm_sums)
        throw std::invalid_argument("pseudo regret: replications disagree on the oblivious sequence");
      expected = cp.arm_sums;
    }
  }
  if (kind == EnvironmentKind::Stochastic)
    for (const auto& m : *means) expected.push_back(m * static_cast<double>(t));
  return pseudo_regret(played, expected);
}

CriterionResult check_sandwich(const std::vector<RunRecord>& records,
                               const std::optional<std::vector<RewardVector>>& means) {
  require_records(records);
  CriterionResult res;
  res.name = "sandwich R'_T <= min_d R_T^d";
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  for (const auto& r : records) {
    const auto& cp = r.final();
    const double gap = cp.regret_general - *std::min_element(cp.regret_dim.begin(), cp.regret_dim.end());
    worst = std::max(worst, gap);
    if (gap > 1e-9) ++violations;
  }
  res.measured = worst;
  res.threshold = 1e-9;
  res.pass = violations == 0;
  std::ostringstream detail;
  detail << records.size() << " runs, " << violations << " violations";
  if (records.front().kind != EnvironmentKind::Adaptive) {
    const PseudoRegret p = pseudo_regret_at(records, horizon_of(records), means);
    double slack_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < p.per_dimension.size(); ++d)
      slack_gap = std::max(slack_gap, -(p.per_dimension[d] + 3.0 * p.per_dimension_se[d]));
    // R-bar' <= min_d (R-bar^d + 3 SE_d)  <=>  R-bar' + max_d(-(R-bar^d + 3 SE_d)) <= 0
    const double mc_gap = p.value + slack_gap;
    const bool mc_ok = mc_gap <= 1e-9;
    res.pass = res.pass && mc_ok;
    detail << "; Monte Carlo R-bar' = " << num(p.value) << ", margin " << num(-mc_gap) << (mc_ok ? "" : " VIOLATED");
  }
  res.detail = detail.str();
  return res;
}

CriterionResult check_degenerate_collapse(const std::vector<RunRecord>& records) {
  require_records(records);
  CriterionResult res;
  res.name = "degenerate collapse R'_T == R_T^d";
  double worst = 0.0;
  for (const auto& r : records) {
    const auto& cp = r.final();
    for (double v : cp.regret_dim) worst = std::max(worst, std::abs(cp.regret_general - v));
  }
  res.measured = worst;
  res.threshold = 1e-9;
  res.pass = worst <= 1e-9;
  res.detail = std::to_string(records.size()) + " runs";
  return res;
}

CriterionResult check_log_growth(const std::vector<RunRecord>& records,
                                 const std::optional<std::vector<RewardVector>>& means, double limit) {
  require_records(records);
  const std::size_t T = horizon_of(records);
  const double full = pseudo_regret_at(records, T, means).value;
  const double half = pseudo_regret_at(records, T / 2, means).value;
  CriterionResult res;
  res.name = "log growth R-bar'_T / R-bar'_{T/2}";
  res.measured = half > 0.0 ? full / half : (full > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  res.threshold = limit;
  res.pass = res.measured <= limit;
  res.detail = "R-bar'(T) = " + num(full) + ", R-bar'(T/2) = " + num(half);
  return res;
}

CriterionResult check_sqrt_growth(const std::vector<RunRecord>& records, double scale_limit, double ratio_limit) {
  require_records(records);
  const std::size_t T = horizon_of(records);
  const std::size_t K = records.front().final().pulls.size();
  std::vector<double> full, quarter;
  for (const auto& r : records) {
    full.push_back(at_time(r, T).regret_general);
    quarter.push_back(at_time(r, T / 4).regret_general);
  }
  const double kd = static_cast<double>(K);
  const double scale = std::sqrt(static_cast<double>(T) * kd * std::log(kd));
  const double mf = mean_of(full), mq = mean_of(quarter);
  const double normalised = mf / scale;
  const double ratio = mq > 0.0 ? mf / mq : (mf > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  CriterionResult res;
  res.name = "sqrt growth mean R'_T / sqrt(T K ln K)";
  res.measured = normalised;
  res.threshold = scale_limit;
  res.pass = normalised <= scale_limit && ratio <= ratio_limit;
  res.detail = "ratio T vs T/4 = " + num(ratio) + " (limit " + num(ratio_limit) + "), mean R'_T = " + num(mf);
  return res;
}

double attack_cost_bound(const ExperimentConfig& config, const std::vector<RewardVector>& means) {
  const std::size_t K = means.size();
  const double sigma = config.attack_sigma(), d0 = config.attack.delta0;
  const double pulls = 2.0 + 9.0 * sigma * sigma / (d0 * d0) * std::log(static_cast<double>(config.horizon));
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < K; ++i) {
    double delta_i = 0.0;
    for (std::size_t d = 0; d < means[i].size(); ++d) delta_i = std::max(delta_i, means[i][d] - means.back()[d]);
    worst = std::max(worst, delta_i + d0);
  }
  const double k1 = static_cast<double>(K - 1);
  return k1 * pulls * worst + k1 * 4.0 * beta(2, sigma, K, config.attack.delta) * pulls;
}

CriterionResult check_pull_cap(const std::vector<RunRecord>& records, const ExperimentConfig& config,
                               std::size_t dims) {
  require_records(records);
  std::size_t bad = 0;
  for (const auto& r : records)
    if (!r.attack) throw std::invalid_argument("check_pull_cap: run without attack statistics");
    else if (r.attack->pull_cap_violated) ++bad;
  CriterionResult res;
  res.name = "pull cap 2 + 9 sigma^2/Delta_0^2 ln t";
  res.measured = static_cast<double>(bad) / static_cast<double>(records.size());
  res.threshold = static_cast<double>(dims) * config.attack.delta + 0.05;
  res.pass = res.measured <= res.threshold;
  res.detail = std::to_string(bad) + " of " + std::to_string(records.size()) + " seeds exceed the cap";
  return res;
}

CriterionResult check_attack_cost(const std::vector<RunRecord>& records, const ExperimentConfig& config,
                                  const std::vector<RewardVector>& means) {
  require_records(records);
  std::vector<double> costs;
  for (const auto& r : records) costs.push_back(r.attack.value().total_cost);
  CriterionResult res;
  res.name = "total attack cost (median)";
  res.measured = median_of(costs);
  res.threshold = 1.5 * attack_cost_bound(config, means);
  res.pass = res.measured <= res.threshold;
  res.detail = "max " + num(*std::max_element(costs.begin(), costs.end()));
  return res;
}

CriterionResult check_linear_regret(const std::vector<RunRecord>& records, const std::vector<RewardVector>& means) {
  require_records(records);
  const double target = target_distance(means);
  std::size_t ok = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    const auto& cp = r.final();
    const double per_step = cp.regret_stochastic.value() / static_cast<double>(cp.t);
    worst = std::min(worst, per_step);
    if (per_step >= 0.8 * target) ++ok;
  }
  CriterionResult res;
  res.name = "linear regret R_T/T >= 0.8 dist(mu^K, O)";
  res.measured = static_cast<double>(ok) / static_cast<double>(records.size());
  res.threshold = 0.9;
  res.pass = res.measured >= res.threshold;
  res.detail = "dist(mu^K, O) = " + num(target) + ", min R_T/T = " + num(worst);
  return res;
}

CriterionResult check_post_attack_regret(const std::vector<RunRecord>& records, const ExperimentConfig& config,
                                         const std::vector<RewardVector>& means) {
  require_records(records);
  const std::size_t K = means.size(), D = means.front().size();
  const double T = static_cast<double>(config.horizon);
  const double gamma = config.environment.gamma;
  const double c_log_t = attack_cost_bound(config, means);
  const double floor_value = gamma * T - c_log_t;
  std::size_t ok = 0, e_fail = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    const auto& a = r.attack.value();
    if (!a.event_e) ++e_fail;
    const double r1 = a.regret_def1.value_or(-std::numeric_limits<double>::infinity());
    const double r2 = a.regret_def2.value_or(-std::numeric_limits<double>::infinity());
    worst = std::min({worst, r1, r2});
    if (r1 >= floor_value && r2 >= floor_value) ++ok;
  }
  const double n = static_cast<double>(records.size());
  const double eta = static_cast<double>(e_fail) / n;
  CriterionResult res;
  res.name = "post-attack Pareto regret >= gamma T - c ln T";
  res.measured = static_cast<double>(ok) / n;
  res.threshold = 1.0 - 2.0 * eta - static_cast<double>(D) * config.attack.delta - 0.05;
  res.pass = K == 2 && res.measured >= res.threshold;
  res.detail = "eta = " + num(eta) + ", floor " + num(floor_value) + ", min regret " + num(worst) +
               (K == 2 ? "" : ", needs K = 2");
  return res;
}

CriterionResult check_robustness(const std::vector<RunRecord>& records, const std::vector<RewardVector>& means) {
  require_records(records);
  const double limit = 0.2 * target_distance(means);
  double worst = 0.0;
  for (const auto& r : records) {
    const auto& cp = r.final();
    worst = std::max(worst, cp.regret_general / static_cast<double>(cp.t));
  }
  CriterionResult res;
  res.name = "robust R'_T/T <= 0.2 dist(mu^K, O)";
  res.measured = worst;
  res.threshold = limit;
  res.pass = worst <= limit;
  res.detail = "worst seed of " + std::to_string(records.size());
  return res;
}

BoundReport check_bounds(const std::vector<RunRecord>& records, const ExperimentConfig& config) {
  require_records(records);
  const EnvironmentPlan plan = plan_environment(config);
  const auto means = plan.means();
  BoundReport report;
  report.scenario = config.scenario;
  auto need_means = [&]() -> const std::vector<RewardVector>& {
    if (!means) throw std::invalid_argument("check_bounds: scenario '" + config.scenario + "' needs a stochastic environment");
    return *means;
  };

  report.results.push_back(check_sandwich(records, means));
  if (config.scenario == "stochastic_log") {
    const double T = static_cast<double>(config.horizon);
    const double ratio = std::log(T) / std::log(T / 2.0);
    const double limit = config.policy.kind == "mo_us" ? ratio * ratio * 1.5 : 1.35;
    report.results.push_back(check_log_growth(records, need_means(), limit));
  } else if (config.scenario == "adversarial_sqrt") {
    report.results.push_back(check_sqrt_growth(records));
    if (plan.degenerate) report.results.push_back(check_degenerate_collapse(records));
  } else if (config.scenario == "degenerate") {
    report.results.push_back(check_degenerate_collapse(records));
  } else if (config.scenario == "attack") {
    const auto& m = need_means();
    report.results.push_back(check_pull_cap(records, config, plan.dims));
    report.results.push_back(check_attack_cost(records, config, m));
    report.results.push_back(check_linear_regret(records, m));
    if (plan.arms == 2) report.results.push_back(check_post_attack_regret(records, config, m));
  } else if (config.scenario == "robustness") {
    report.results.push_back(check_robustness(records, need_means()));
  } else {
    throw std::invalid_argument("check_bounds: unknown scenario '" + config.scenario + "'");
  }
  return report;
}

}  // namespace momab
