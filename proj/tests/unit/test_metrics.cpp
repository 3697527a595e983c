#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "momab/environment.hpp"
#include "momab/metrics.hpp"
#include "momab/pareto.hpp"
#include "momab/policies.hpp"
#include "support.hpp"

using namespace momab;

namespace {

RewardMatrix matrix(std::initializer_list<RewardVector> rows) {
  RewardMatrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    for (std::size_t d = 0; d < r.size(); ++d) m(i, d) = r[d];
    ++i;
  }
  return m;
}

// A random policy on a random stochastic instance, recorded in a ledger.
RegretLedger random_run(testing::Gen& g, std::size_t k, std::size_t d, std::size_t horizon) {
  StochasticSpec spec{g.vectors(k, d), NoiseKind::TruncatedGaussian, 0.2};
  Environment env(spec, horizon, g.between(0, 1 << 30));
  RegretLedger led(k, d, horizon, EnvironmentKind::Stochastic, spec.means);
  for (std::size_t t = 1; t <= horizon; ++t) led.record(env.step(t), g.between(0, k - 1));
  return led;
}

}  // namespace

TEST_CASE("hand tensor: two steps, two arms, two dimensions") {
  RegretLedger led(2, 2, 2, EnvironmentKind::Oblivious);
  led.record(matrix({{0.5, 0.1}, {0.2, 0.6}}), 1);
  led.record(matrix({{0.3, 0.4}, {0.9, 0.0}}), 0);
  // arm sums (0.8, 0.5) and (1.1, 0.6); played (0.5, 1.0)
  CHECK(per_dimension_regret(led, 0) == doctest::Approx(0.6));
  CHECK(per_dimension_regret(led, 1) == doctest::Approx(-0.4));  // unclamped
  CHECK(general_pareto_regret(led) == 0.0);
  CHECK(general_pareto_regret(led, 1) == doctest::Approx(0.0));
  // prefix t = 1: sums (0.5, 0.1), (0.2, 0.6), played (0.2, 0.6)
  CHECK(per_dimension_regret(led, 0, 1) == doctest::Approx(0.3));
  CHECK(per_dimension_regret(led, 1, 1) == doctest::Approx(0.0));
  CHECK_THROWS(per_dimension_regret(led, 2));
  CHECK_THROWS(stochastic_pareto_regret(led));

  RegretLedger partial(2, 2, 3, EnvironmentKind::Oblivious);
  partial.record(matrix({{0.5, 0.1}, {0.2, 0.6}}), 1);
  CHECK_THROWS_AS(general_pareto_regret(partial), std::logic_error);
}

TEST_CASE("playing the best arm of a dimension gives zero regret there") {
  RegretLedger led(2, 2, 3, EnvironmentKind::Oblivious);
  for (int t = 0; t < 3; ++t) led.record(matrix({{0.9, 0.1}, {0.2, 0.6}}), 0);
  CHECK(per_dimension_regret(led, 0) == 0.0);
  CHECK(general_pareto_regret(led) == 0.0);
  CHECK(per_dimension_regret(led, 1) == doctest::Approx(1.5));
}

TEST_CASE("general regret below every per-dimension regret") {
  testing::Gen g(21);
  for (int n = 0; n < 200; ++n) {
    const auto led = random_run(g, g.between(2, 5), g.between(1, 4), g.between(1, 60));
    const auto tot = totals(led);
    double lowest = per_dimension_regret(tot, 0);
    for (std::size_t d = 1; d < led.dims(); ++d) lowest = std::min(lowest, per_dimension_regret(tot, d));
    std::vector<RewardVector> sums = tot.arm_sums;
    // the unclamped distance is always below; the clamped one whenever min_d R^d >= 0
    CHECK(signed_dist(tot.played_sum.view(), ParetoFront::from_vectors(sums)) <= lowest + 1e-9);
    if (lowest >= 0.0) CHECK(general_pareto_regret(tot) <= lowest + 1e-9);
  }
}

TEST_CASE("degenerate ledgers collapse every regret to the scalar one") {
  testing::Gen g(22);
  for (int n = 0; n < 50; ++n) {
    const std::size_t k = g.between(2, 4), d = g.between(1, 4), horizon = g.between(1, 40);
    std::vector<std::vector<double>> base(horizon, std::vector<double>(k));
    for (auto& row : base)
      for (double& x : row) x = g.coarse(8);
    Environment env(make_degenerate(base, d), horizon);
    RegretLedger led(k, d, horizon, EnvironmentKind::Oblivious);
    std::vector<double> arm(k, 0.0);
    double played = 0.0;
    for (std::size_t t = 1; t <= horizon; ++t) {
      const std::size_t a = g.between(0, k - 1);
      led.record(env.step(t), a);
      for (std::size_t i = 0; i < k; ++i) arm[i] += base[t - 1][i];
      played += base[t - 1][a];
    }
    const double scalar = *std::max_element(arm.begin(), arm.end()) - played;
    for (std::size_t dd = 0; dd < d; ++dd) CHECK(per_dimension_regret(led, dd) == doctest::Approx(scalar));
    CHECK(general_pareto_regret(led) == doctest::Approx(std::max(0.0, scalar)));
  }
}

TEST_CASE("stochastic regret: both algebraic forms agree") {
  testing::Gen g(23);
  for (int n = 0; n < 100; ++n) {
    const auto led = random_run(g, g.between(2, 6), g.between(1, 4), g.between(1, 200));
    const double a = stochastic_pareto_regret(led), b = stochastic_pareto_regret_stepwise(led);
    CHECK(std::abs(a - b) <= 1e-9);
    // all arms on the front: zero
    bool all_front = pareto_front(*led.means()).size() == led.arms();
    if (all_front) CHECK(a == 0.0);
  }
}

TEST_CASE("stochastic regret of always pulling the dominated target") {
  const auto gi = make_gap_instance(3, 2, 0.1, 0.1);
  Environment env(gi.spec, 100, 1);
  RegretLedger led(3, 2, 100, EnvironmentKind::Stochastic, gi.spec.means);
  for (std::size_t t = 1; t <= 100; ++t) led.record(env.step(t), 2);
  const auto f = pareto_front(gi.spec.means);
  CHECK(stochastic_pareto_regret(led) == doctest::Approx(100.0 * dist(gi.spec.means[2], f)));
  CHECK(stochastic_pareto_regret(led) >= 5.0 * 0.1 * 100 - 1e-9);
}

TEST_CASE("pseudo regret") {
  SUBCASE("single stochastic replication is the conditional form") {
    testing::Gen g(24);
    const auto led = random_run(g, 3, 2, 50);
    std::vector<RegretLedger> runs{led};
    const auto pr = pareto_pseudo_regret(runs);
    RewardVector played(2);
    for (std::size_t a : led.pulls()) played += (*led.means())[a];
    std::vector<RewardVector> scaled;
    for (const auto& m : *led.means()) scaled.push_back(m * 50.0);
    CHECK(pr.replications == 1);
    CHECK(pr.value == doctest::Approx(dist(played, pareto_front(scaled))));
  }
  SUBCASE("deterministic oblivious sequence and policy equals the general regret") {
    const auto spec = make_bernoulli_degenerate(std::vector<double>{0.7, 0.4, 0.6}, 300, 2, 3);
    std::vector<RegretLedger> runs;
    for (int r = 0; r < 3; ++r) {
      Environment env(spec, 300);
      MoKsPolicy p(0, 0, 3, 2);
      Rng rng(r);
      RegretLedger led(3, 2, 300, EnvironmentKind::Oblivious);
      for (std::size_t t = 1; t <= 300; ++t) {
        const auto& m = env.step(t);
        const std::size_t a = p.select(rng);
        p.observe(a, m.row(a));
        led.record(m, a);
      }
      runs.push_back(std::move(led));
    }
    const auto pr = pareto_pseudo_regret(runs);
    CHECK(pr.value == doctest::Approx(general_pareto_regret(runs[0])));
    for (double se : pr.per_dimension_se) CHECK(se == doctest::Approx(0.0));
  }
  SUBCASE("adaptive runs are rejected") {
    RegretLedger led(2, 1, 1, EnvironmentKind::Adaptive);
    led.record(RewardMatrix(2, 1, 0.5), 0);
    std::vector<RegretLedger> runs{led};
    CHECK_THROWS_AS(pareto_pseudo_regret(runs), std::logic_error);
  }
}

TEST_CASE("post-attack fronts") {
  std::vector<RewardVector> mu{{0.9, 0.9}, {0.4, 0.4}};
  const auto step = [](double a, double b) { return matrix({{a, a}, {b, b}}); };

  SUBCASE("without attack both definitions give the plain fronts") {
    LedgerTotals tot(2, 2);
    tot.add(step(0.8, 0.3), 0);
    tot.add(step(1.0, 0.5), 1);
    tot.add(step(0.9, 0.4), 0);
    for (int def : {1, 2}) {
      const auto f = post_attack_fronts(tot, mu, def);
      CHECK(f.expected_vectors == mu);
      CHECK(f.realized_vectors[0][0] == doctest::Approx(0.9));
      CHECK(f.realized_vectors[1][1] == doctest::Approx(0.4));
      CHECK(f.played[0] == doctest::Approx((0.8 + 0.5 + 0.9) / 3));
      CHECK(post_attack_general_regret(tot, mu, def) ==
            doctest::Approx(3.0 * dist(f.played, pareto_front(f.realized_vectors))));
    }
  }
  SUBCASE("two arms: pooled and per-arm cost averages coincide") {
    LedgerTotals tot(2, 2);
    tot.add(step(0.8, 0.3), 0, 0.5);
    tot.add(step(1.0, 0.5), 1, 0.0);
    tot.add(step(0.9, 0.4), 0, 0.7);
    tot.add(step(0.9, 0.4), 1, 0.0);
    const auto f = post_attack_fronts(tot, mu, 1);
    const double shared = (0.5 + 0.7) / 2.0;
    CHECK(f.expected_vectors[0][0] == doctest::Approx(0.9 - shared));
    CHECK(f.realized_vectors[0][0] == doctest::Approx((0.8 + 1.0 + 0.9 + 0.9) / 4 - shared));
    CHECK(f.played[0] == doctest::Approx((0.8 + 0.5 + 0.9 + 0.4) / 4 - shared));
  }
  SUBCASE("counterfactual-cost fronts") {
    LedgerTotals tot(2, 2);
    const std::vector<double> cf1{0.4, 0.0}, cf2{0.2, 0.0};
    tot.add(step(0.8, 0.3), 1, 0.4, cf1);
    tot.add(step(1.0, 0.5), 0, 0.2, cf2);
    const auto f = post_attack_fronts(tot, mu, 2);
    CHECK(f.expected_vectors[0][1] == doctest::Approx(0.9 - 0.3));
    CHECK(f.expected_vectors[1] == mu[1]);
    CHECK(f.played[0] == doctest::Approx((0.3 + 1.0) / 2 - 0.2 / 2));
    CHECK(tot.counterfactual_played <= tot.cost + 1e-12);
  }
  SUBCASE("pooled-cost fronts need a non-target pull") {
    LedgerTotals tot(2, 2);
    tot.add(step(0.8, 0.3), 1);
    CHECK_THROWS_AS(post_attack_fronts(tot, mu, 1), std::domain_error);
    CHECK_NOTHROW(post_attack_fronts(tot, mu, 2));
    CHECK_THROWS(post_attack_fronts(tot, mu, 3));
  }
}

TEST_CASE("attack summary and totals") {
  std::vector<RewardVector> mu{{0.9}, {0.4}};
  RegretLedger led(2, 1, 4, EnvironmentKind::Stochastic, mu);
  led.record(RewardMatrix(2, 1, 0.5), 0);
  led.record(RewardMatrix(2, 1, 0.5), 1);
  const auto zero = attack_summary(led, 2);
  CHECK(zero.total_cost == 0.0);
  CHECK(zero.target_share == doctest::Approx(0.5));
  led.record(RewardMatrix(2, 1, 0.5), 0, 0.25);
  led.record(RewardMatrix(2, 1, 0.5), 1, 0.0);
  const auto s = attack_summary(led);
  CHECK(s.total_cost == 0.25);
  CHECK(s.pulls == std::vector<std::size_t>{2, 2});
  CHECK(s.cost_per_arm[0] == 0.25);

  // incremental totals equal the ledger sums at every prefix
  testing::Gen g(25);
  const auto run = random_run(g, 4, 3, 80);
  LedgerTotals inc(4, 3);
  for (std::size_t t = 1; t <= 80; ++t) {
    RewardMatrix m(4, 3);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t d = 0; d < 3; ++d) m(i, d) = run.reward(t, i, d);
    inc.add(m, run.pulls()[t - 1]);
    const auto ref = totals(run, t);
    REQUIRE(ref.counts == inc.counts);
    REQUIRE(general_pareto_regret(ref) == general_pareto_regret(inc));
  }
}

TEST_CASE("concentration events") {
  std::vector<RewardVector> mu{{0.5, 0.5}, {0.2, 0.2}};
  LedgerTotals tot(2, 2);
  tot.add(matrix({{0.52, 0.48}, {0.21, 0.6}}), 0);
  tot.add(matrix({{0.5, 0.5}, {0.19, 0.2}}), 0);
  const auto ev = concentration_events(tot, mu, 0.1);
  CHECK(ev.pulled);      // arm 1 never pulled, arm 0 within 0.1
  CHECK_FALSE(ev.all_steps);  // arm 1's all-step mean is 0.4 in dimension 2
}
