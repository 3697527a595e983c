#include "momab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "momab/attack.hpp"
#include "momab/pareto.hpp"

namespace momab {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

bool coordinates_equal(const ObliviousSequence& seq) {
  for (std::size_t t = 1; t <= seq.horizon(); ++t)
    for (std::size_t i = 0; i < seq.arms(); ++i)
      for (std::size_t d = 1; d < seq.dims(); ++d)
        if (seq.at(t, i, d) != seq.at(t, i, 0)) return false;
  return true;
}

}  // namespace

std::optional<std::vector<RewardVector>> EnvironmentPlan::means() const {
  if (const auto* s = std::get_if<StochasticSpec>(&spec)) return s->means;
  return std::nullopt;
}

Environment EnvironmentPlan::instantiate(std::size_t horizon, std::uint64_t seed) const {
  if (const auto* s = std::get_if<StochasticSpec>(&spec)) return Environment(*s, horizon, seed);
  return Environment(std::get<AdversarySpec>(spec), horizon);
}

EnvironmentPlan plan_environment(const ExperimentConfig& config) {
  const auto& e = config.environment;
  EnvironmentPlan plan;
  if (e.kind == "stochastic") {
    StochasticSpec s{e.means, e.noise, e.sigma};
    s.validate();
    plan.spec = std::move(s);
  } else if (e.kind == "gap") {
    plan.spec = make_gap_instance(e.arms, e.dims ? e.dims : 2, e.gamma, e.sigma, e.noise, e.margin, e.top, e.spread)
                    .spec;
  } else if (e.kind == "constant_mean") {
    if (e.dims == 0) throw std::invalid_argument("config: constant_mean needs [environment] dims");
    plan.spec = make_constant_mean_degenerate(e.scalars, e.dims, e.sigma, e.noise);
    plan.degenerate = e.sigma == 0.0 || e.dims == 1;
  } else if (e.kind == "bernoulli_degenerate") {
    if (e.dims == 0) throw std::invalid_argument("config: bernoulli_degenerate needs [environment] dims");
    plan.spec = make_bernoulli_degenerate(e.scalars, config.horizon, e.dims, e.fixture_seed);
    plan.degenerate = true;
  } else if (e.kind == "oblivious_csv") {
    ObliviousSequence seq = load_oblivious_csv(e.path);
    plan.degenerate = coordinates_equal(seq);
    plan.spec = AdversarySpec{std::move(seq)};
  } else if (e.kind == "least_pulled") {
    if (e.arms == 0 || e.dims == 0) throw std::invalid_argument("config: least_pulled needs arms and dims");
    plan.spec = make_least_pulled_adversary(e.arms, e.dims, e.high, e.low);
    plan.degenerate = true;
  } else {
    throw std::invalid_argument("config: unknown environment kind '" + e.kind + "'");
  }
  if (const auto* s = std::get_if<StochasticSpec>(&plan.spec)) {
    plan.arms = s->arms();
    plan.dims = s->dims();
    plan.kind = EnvironmentKind::Stochastic;
  } else {
    const auto& a = std::get<AdversarySpec>(plan.spec);
    plan.arms = a.arms();
    plan.dims = a.dims();
    plan.kind = a.oblivious() ? EnvironmentKind::Oblivious : EnvironmentKind::Adaptive;
  }
  return plan;
}

std::unique_ptr<Policy> make_policy(const ExperimentConfig& config, std::size_t arms, std::size_t dims,
                                    bool bounded) {
  const auto& p = config.policy;
  if (p.kind == "mo_ks")
    return std::make_unique<MoKsPolicy>(p.s, p.dimension, arms, dims, config.horizon, p.delta, bounded);
  if (p.kind == "mo_us") return std::make_unique<MoUsPolicy>(p.dimension, arms, dims, bounded);
  if (p.kind == "pareto_ucb") return std::make_unique<ParetoUcbPolicy>(arms, dims, config.policy_sigma(), p.radius);
  if (p.kind == "ucb") return std::make_unique<DimensionUcbPolicy>(p.dimension, arms, dims, bounded);
  if (p.kind == "exp3p")
    return std::make_unique<DimensionExp3pPolicy>(p.dimension, arms, dims, config.horizon, p.delta, bounded);
  throw std::invalid_argument("config: unknown policy kind '" + p.kind + "'");
}

std::vector<std::size_t> checkpoint_schedule(std::size_t horizon, const std::string& spec) {
  if (horizon == 0) throw std::invalid_argument("checkpoint_schedule: empty horizon");
  std::set<std::size_t> ts{horizon};
  if (spec == "geometric") {
    for (std::size_t p = 1; p <= horizon; p *= 2) ts.insert(p);
    if (horizon / 4 > 0) ts.insert(horizon / 4);
    if (horizon / 2 > 0) ts.insert(horizon / 2);
  } else if (spec.rfind("every:", 0) == 0) {
    const long long n = std::stoll(spec.substr(6));
    if (n <= 0) throw std::invalid_argument("checkpoint_schedule: stride must be positive");
    for (std::size_t t = static_cast<std::size_t>(n); t <= horizon; t += static_cast<std::size_t>(n)) ts.insert(t);
  } else {
    throw std::invalid_argument("checkpoint_schedule: unknown spec '" + spec + "'");
  }
  return {ts.begin(), ts.end()};
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> front_indices(const Policy& p) {
  if (const auto* pu = dynamic_cast<const ParetoUcbPolicy*>(&p)) return pu->last_front().indices();
  throw std::logic_error("harness: the pareto_ucb attack needs a Pareto UCB victim");
}

std::unique_ptr<Policy> make_shadow(const ExperimentConfig& config, std::size_t arms, std::size_t dims) {
  if (config.attack.kind == "pareto_ucb")
    return std::make_unique<ParetoUcbPolicy>(arms, dims, config.attack_sigma(), config.policy.radius);
  return std::make_unique<DimensionUcbPolicy>(config.attack.dimension, arms, dims, false);
}

}  // namespace

RunRecord run_single(const ExperimentConfig& config, const EnvironmentPlan& plan, std::size_t run_id,
                     bool keep_ledger) {
  const std::size_t T = config.horizon, K = plan.arms, D = plan.dims;
  validate(config, K, D);
  RunRecord rec;
  rec.run_id = run_id;
  rec.seed = config.seed + run_id;
  rec.kind = plan.kind;

  Environment env = plan.instantiate(T, rec.seed);
  const auto means = plan.means();
  const bool attacked = config.attack.enabled;
  const bool bounded = env.bounded() && !attacked;
  auto policy = make_policy(config, K, D, bounded);
  Rng rng(rec.seed, Stream::Policy);
  Rng shadow_rng(rec.seed, Stream::Shadow);

  const bool shadow_victim = attacked && config.attack.victim == "shadow";
  std::unique_ptr<Policy> shadow = shadow_victim ? make_shadow(config, K, D) : nullptr;
  const AttackParams params{config.attack.delta0, config.attack.delta, config.attack_sigma()};
  std::optional<ParetoUcbAttacker> pareto_attacker;
  std::optional<UcbAttacker> ucb_attacker;
  if (attacked && config.attack.kind == "pareto_ucb") {
    const double victim_sigma = shadow_victim ? config.attack_sigma() : config.policy_sigma();
    pareto_attacker.emplace(K, D, params, config.policy.radius, victim_sigma);
  } else if (attacked) {
    ucb_attacker.emplace(K, D, config.attack.dimension, params);
  }
  std::optional<ConcentrationMonitor> monitor;
  if (attacked && means) monitor.emplace(*means, params.sigma, params.delta);

  const std::size_t target = K - 1;
  std::vector<double> deltas(K, 0.0);
  ParetoFront true_front;
  if (means) {
    true_front = pareto_front(*means);
    for (std::size_t j = 0; j < K; ++j)
      for (std::size_t d = 0; d < D; ++d) deltas[j] = std::max(deltas[j], (*means)[j][d] - (*means)[target][d]);
  }

  std::optional<RegretLedger> ledger;
  if (keep_ledger) ledger.emplace(K, D, T, plan.kind, means);
  LedgerTotals tot(K, D);
  std::vector<std::size_t> pulls;
  pulls.reserve(T);
  std::vector<std::size_t> victim_counts(K, 0);
  std::uint64_t digest = 1469598103934665603ull;

  AttackStats stats;
  const auto schedule = checkpoint_schedule(T, config.checkpoints);
  auto next_cp = schedule.begin();
  RewardVector received(D);
  RewardVector victim_received(D);

  for (std::size_t t = 1; t <= T; ++t) {
    const RewardMatrix& R = env.step(t, pulls);
    double alpha = 0.0;
    std::vector<double> cf;
    std::size_t arm = 0, victim_arm = 0;

    if (pareto_attacker) {
      auto out = pareto_attacker->attack(t, R);
      alpha = out.alpha;
      cf = std::move(out.counterfactual);
      arm = policy->select(rng);
      if (shadow) {
        victim_arm = shadow->select(shadow_rng);
        if (front_indices(*shadow) != out.front.indices())
          throw std::logic_error("harness: attacker front diverged from the victim's");
      } else {
        victim_arm = arm;
        if (front_indices(*policy) != out.front.indices())
          throw std::logic_error("harness: attacker front diverged from the victim's");
      }
    } else if (ucb_attacker) {
      arm = policy->select(rng);
      victim_arm = shadow ? shadow->select(shadow_rng) : arm;
      alpha = ucb_attacker->attack(t, victim_arm, R.row(victim_arm));
    } else {
      arm = policy->select(rng);
    }

    for (std::size_t d = 0; d < D; ++d) received[d] = R(arm, d) - alpha;
    policy->observe(arm, received.view());
    if (attacked) {
      if (shadow) {
        for (std::size_t d = 0; d < D; ++d) victim_received[d] = R(victim_arm, d) - alpha;
        shadow->observe(victim_arm, victim_received.view());
      }
      if (pareto_attacker) pareto_attacker->observe(victim_arm, R.row(victim_arm), alpha);
      if (ucb_attacker) ucb_attacker->observe(victim_arm, R.row(victim_arm), alpha);
      if (monitor) monitor->observe(victim_arm, R.row(victim_arm));
      ++victim_counts[victim_arm];
    }
    tot.add(R, arm, alpha, cf);
    if (ledger) ledger->record(R, arm, alpha, cf);
    pulls.push_back(arm);
    digest = (digest ^ static_cast<std::uint64_t>(arm)) * 1099511628211ull;

    if (next_cp != schedule.end() && *next_cp == t) {
      ++next_cp;
      Checkpoint cp;
      cp.t = t;
      cp.regret_general = general_pareto_regret(tot);
      for (std::size_t d = 0; d < D; ++d) cp.regret_dim.push_back(per_dimension_regret(tot, d));
      cp.attack_cost_cum = tot.cost;
      cp.pulls = tot.counts;
      cp.played_sum = tot.played_sum;
      cp.arm_sums = tot.arm_sums;
      if (means) {
        cp.regret_stochastic = stochastic_pareto_regret(*means, tot.counts);
        RewardVector pm(D);
        for (std::size_t i = 0; i < K; ++i) pm += (*means)[i] * static_cast<double>(tot.counts[i]);
        cp.played_mean_sum = std::move(pm);
      }
      if (attacked) {
        cp.victim_pulls = victim_counts;
        if (t >= 2 * K) {
          const double s2 = params.sigma * params.sigma;
          const double cap = 2.0 + 9.0 * s2 / (params.delta0 * params.delta0) * std::log(static_cast<double>(t));
          for (std::size_t i = 0; i < target; ++i)
            if (static_cast<double>(victim_counts[i]) > cap && !stats.pull_cap_violated) {
              stats.pull_cap_violated = true;
              stats.worst_pull_excess_t = t;
            }
        }
        if (means) {
          double cost_cap = 0.0;
          for (std::size_t j = 0; j < target; ++j)
            if (victim_counts[j] > 0)
              cost_cap = std::max(cost_cap, static_cast<double>(victim_counts[j]) *
                                                (deltas[j] + params.delta0 +
                                                 4.0 * beta(victim_counts[j], params.sigma, K, params.delta)));
          const auto& per_arm = pareto_attacker ? pareto_attacker->cost_per_arm() : ucb_attacker->cost_per_arm();
          for (std::size_t j = 0; j < target; ++j)
            if (per_arm[j] > cost_cap + 1e-9) stats.cost_cap_ok = false;
        }
      }
      rec.checkpoints.push_back(std::move(cp));
    }
  }

  if (attacked) {
    stats.total_cost = tot.cost;
    stats.target_share = static_cast<double>(tot.counts[target]) / static_cast<double>(T);
    stats.victim_target_share = static_cast<double>(victim_counts[target]) / static_cast<double>(T);
    stats.cost_per_arm = tot.cost_per_arm;
    stats.counterfactual_ok = tot.counterfactual_played <= tot.cost + 1e-9 * std::max(1.0, tot.cost);
    if (monitor) {
      stats.event_e = monitor->held();
      stats.event_e_failure = monitor->first_failure();
    }
    if (means) {
      const auto ev = concentration_events(tot, *means, config.environment.gamma);
      stats.e0 = ev.pulled;
      stats.e1 = ev.all_steps;
      stats.target_distance = dist((*means)[target], true_front);
      try {
        stats.regret_def1 = post_attack_general_regret(tot, *means, 1);
      } catch (const std::domain_error&) {
      }
      stats.regret_def2 = post_attack_general_regret(tot, *means, 2);
    }
    rec.attack = std::move(stats);
  }
  rec.action_digest = digest;
  if (ledger) rec.ledger = std::make_shared<const RegretLedger>(std::move(*ledger));
  return rec;
}

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MOMAB_WORKERS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, std::size_t workers, bool keep_ledgers) {
  validate(config);
  const EnvironmentPlan plan = plan_environment(config);
  validate(config, plan.arms, plan.dims);
  // fail on policy construction errors before any run starts
  (void)make_policy(config, plan.arms, plan.dims, false);

  const std::size_t R = config.replications;
  std::vector<std::optional<RunRecord>> slots(R);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= R) return;
      try {
        slots[i] = run_single(config, plan, i, keep_ledgers);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = R;
        return;
      }
    }
  };
  const std::size_t n = worker_count(workers, R);
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<RunRecord> out;
  out.reserve(R);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------

std::string csv_text(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("write_csv: no records");
  const auto& first = records.front().final();
  const std::size_t D = first.regret_dim.size(), K = first.pulls.size();
  std::ostringstream out;
  out << "run_id,seed,t,regret_general,regret_stochastic";
  for (std::size_t d = 1; d <= D; ++d) out << ",regret_dim_" << d;
  out << ",attack_cost_cum";
  for (std::size_t i = 1; i <= K; ++i) out << ",pulls_arm_" << i;
  out << '\n';

  std::vector<const RunRecord*> order;
  for (const auto& r : records) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->run_id < b->run_id; });
  for (const RunRecord* r : order) {
    for (const auto& cp : r->checkpoints) {
      if (cp.regret_dim.size() != D || cp.pulls.size() != K)
        throw std::invalid_argument("write_csv: records disagree on K or D");
      out << r->run_id << ',' << r->seed << ',' << cp.t << ',' << num(cp.regret_general) << ',';
      if (cp.regret_stochastic) out << num(*cp.regret_stochastic);
      for (double v : cp.regret_dim) out << ',' << num(v);
      out << ',' << num(cp.attack_cost_cum);
      for (std::size_t n : cp.pulls) out << ',' << n;
      out << '\n';
    }
  }
  return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

void write_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
  write_file(path, csv_text(records));
}

std::string metadata_text(const ExperimentConfig& config) {
  const EnvironmentPlan plan = plan_environment(config);
  std::ostringstream out;
  for (const auto& [k, v] : describe(config)) out << k << '=' << v << '\n';
  out << "environment.arms_resolved=" << plan.arms << '\n';
  out << "environment.dims_resolved=" << plan.dims << '\n';
  if (const auto means = plan.means()) {
    out << "environment.means_resolved=";
    for (std::size_t i = 0; i < means->size(); ++i) {
      if (i) out << " | ";
      for (std::size_t d = 0; d < (*means)[i].size(); ++d) out << (d ? "," : "") << num((*means)[i][d]);
    }
    out << '\n';
  }
  const auto policy = make_policy(config, plan.arms, plan.dims, false);
  for (const auto& [k, v] : policy->parameters()) out << "policy.resolved." << k << '=' << v << '\n';
  out << "seeds=" << config.seed << ".." << config.seed + config.replications - 1 << '\n';
  out << "checkpoint_times=";
  const auto ts = checkpoint_schedule(config.horizon, config.checkpoints);
  for (std::size_t i = 0; i < ts.size(); ++i) out << (i ? "," : "") << ts[i];
  out << '\n';
  return out.str();
}

void write_metadata(const ExperimentConfig& config, const std::filesystem::path& csv_path) {
  write_file(csv_path.string() + ".meta", metadata_text(config));
}

}  // namespace momab
