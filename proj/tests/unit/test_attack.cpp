#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "momab/attack.hpp"
#include "momab/environment.hpp"
#include "momab/policies.hpp"
#include "support.hpp"

using namespace momab;

namespace {

double beta_ref(double n, double sigma, double k, double delta) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return std::sqrt(2.0 * sigma * sigma / n * std::log(pi2 * k * n * n / (3.0 * delta)));
}

ParetoFront members(std::initializer_list<std::size_t> idx, std::size_t dims) {
  std::vector<FrontMember> m;
  for (std::size_t i : idx) m.push_back({i, RewardVector(dims)});
  return ParetoFront(m);
}

}  // namespace

TEST_CASE("beta radius") {
  // sqrt(0.02 * ln(2 pi^2 / 0.15))
  CHECK(beta(1, 0.1, 2, 0.05) == doctest::Approx(0.3124).epsilon(1e-4));
  CHECK(beta(1, 0.1, 2, 0.05) == doctest::Approx(std::sqrt(0.02 * std::log(std::numbers::pi * std::numbers::pi * 2 / 0.15))));
  for (std::size_t n = 1; n < 4096; n *= 2) CHECK(beta(2 * n, 0.1, 5, 0.05) < beta(n, 0.1, 5, 0.05));
  CHECK(beta(3, 0.0, 5, 0.05) == 0.0);
  CHECK_THROWS(beta(0, 0.1, 5, 0.05));
  testing::Gen g(1);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = g.between(1, 1000), arms = g.between(2, 10);
    const double s = g.uniform(0.01, 1.0), d = g.uniform(0.01, 0.5);
    CHECK(beta(n, s, arms, d) == doctest::Approx(beta_ref(n, s, arms, d)));
  }
}

TEST_CASE("ucb attack leaves the target alone and clamps at zero") {
  UcbAttacker a(2, 2, 0, {});
  const RewardVector hi{0.9, 0.9}, lo{0.4, 0.4};
  // warm start: no cost in the first 2K steps
  for (std::size_t t = 1; t <= 4; ++t) {
    const std::size_t arm = a.predict();
    const RewardVector& r = arm == 0 ? hi : lo;
    CHECK(a.attack(t, arm, r.view()) == 0.0);
    a.observe(arm, r.view(), 0.0);
  }
  CHECK(a.total_cost() == 0.0);
  const std::size_t arm = a.predict();
  CHECK_THROWS_AS(a.attack(5, 1 - arm, hi.view()), std::logic_error);

  // explicit value for a non-target pull
  UcbAttacker b(2, 2, 1, {0.1, 0.05, 0.1});
  b.observe(0, hi.view(), 0.0);
  b.observe(1, lo.view(), 0.0);
  b.observe(0, hi.view(), 0.0);
  b.observe(1, lo.view(), 0.0);
  REQUIRE(b.predict() == 0);
  const double zbar = 0.4 - 2.0 * beta_ref(2, 0.1, 2, 0.05) - 0.1;
  CHECK(b.attack(5, 0, hi.view()) == doctest::Approx(std::max(0.0, 3 * 0.9 - 3 * zbar)));

  // an arm already charged enough is not charged again
  UcbAttacker c(2, 1, 0, {});
  c.observe(0, RewardVector{0.5}.view(), 3.0);
  c.observe(1, RewardVector{0.5}.view(), 0.0);
  c.observe(1, RewardVector{0.5}.view(), 0.0);
  c.observe(1, RewardVector{0.5}.view(), 0.0);
  if (c.predict() == 0) CHECK(c.attack(5, 0, RewardVector{0.5}.view()) == 0.0);
}

TEST_CASE("ucb attack hijacks a scalar ucb player") {
  const auto g = make_gap_instance(2, 2, 0.1, 0.1);
  const std::size_t horizon = 10000;
  Environment env(g.spec, horizon, 4);
  ScalarUcb bob(2, false);
  UcbAttacker alice(2, 2, 0, {0.1, 0.05, 0.1});
  std::size_t target = 0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const auto& r = env.step(t);
    const std::size_t a = bob.select();
    const double alpha = alice.attack(t, a, r.row(a));
    REQUIRE(alpha >= 0.0);
    if (a == 1) REQUIRE(alpha == 0.0);
    bob.update(a, r(a, 0) - alpha);
    alice.observe(a, r.row(a), alpha);
    target += a == 1;
  }
  CHECK(static_cast<double>(target) / horizon > 0.9);
}

TEST_CASE("pareto ucb attack counterfactual costs") {
  ParetoUcbAttacker a(3, 2, {0.1, 0.05, 0.1});
  a.observe(0, RewardVector{0.9, 0.6}.view(), 0.0);
  a.observe(1, RewardVector{0.6, 0.9}.view(), 0.0);
  a.observe(2, RewardVector{0.3, 0.3}.view(), 0.0);
  a.observe(0, RewardVector{0.8, 0.5}.view(), 0.0);
  RewardMatrix r(3, 2);
  r(0, 0) = 0.7, r(0, 1) = 0.4, r(1, 0) = 0.5, r(1, 1) = 1.0, r(2, 0) = 0.2, r(2, 1) = 0.1;

  const double z = 0.3 - 2.0 * beta_ref(1, 0.1, 3, 0.05) - 0.1;
  const auto both = a.counterfactual_costs(members({0, 1}, 2), r);
  CHECK(both[0] == doctest::Approx(std::max(0.9 + 0.8 + 0.7, 0.6 + 0.5 + 0.4) - 3 * z));
  CHECK(both[1] == doctest::Approx(std::max(0.6 + 0.5, 0.9 + 1.0) - 2 * z));
  CHECK(both[2] == 0.0);
  // arms outside the front carry no counterfactual cost
  const auto one = a.counterfactual_costs(members({1}, 2), r);
  CHECK(one[0] == 0.0);
  CHECK(one[1] == doctest::Approx(both[1]));

  // previous charges push the post-attack mean below the threshold: clamp at 0
  ParetoUcbAttacker c(2, 1, {0.1, 0.05, 0.1});
  c.observe(0, RewardVector{0.9}.view(), 5.0);
  c.observe(1, RewardVector{0.4}.view(), 0.0);
  RewardMatrix rc(2, 1);
  rc(0, 0) = 0.9;
  CHECK(c.counterfactual_costs(members({0}, 1), rc)[0] == 0.0);
}

TEST_CASE("pareto ucb attack outcome rules") {
  const auto g = make_gap_instance(3, 2, 0.1, 0.1);
  Environment env(g.spec, 3000, 12);
  ParetoUcbPolicy bob(3, 2, 0.1);
  ParetoUcbAttacker alice(3, 2, {0.1, 0.05, 0.1});
  Rng rng(12);
  double counterfactual_played = 0.0;
  for (std::size_t t = 1; t <= 3000; ++t) {
    const auto& r = env.step(t);
    const auto out = alice.attack(t, r);
    const std::size_t a = bob.select(rng);
    if (t > 3) REQUIRE(out.front.indices() == bob.last_front().indices());
    if (t <= 6 || out.target_in_front) REQUIRE(out.alpha == 0.0);
    if (!out.front.empty() && !out.target_in_front && t > 6) {
      REQUIRE(out.alpha == *std::max_element(out.counterfactual.begin(), out.counterfactual.end()));
      for (std::size_t i = 0; i < 3; ++i)
        if (!out.front.contains(i)) REQUIRE(out.counterfactual[i] == 0.0);
      if (out.front.size() == 1) REQUIRE(out.counterfactual[out.front.indices()[0]] == out.alpha);
    }
    counterfactual_played += out.counterfactual[a];
    RewardVector received(r.row(a));
    received -= RewardVector::ones(2, out.alpha);
    bob.observe(a, received.view());
    alice.observe(a, r.row(a), out.alpha);
  }
  CHECK(counterfactual_played <= alice.total_cost() + 1e-9);
  CHECK_THROWS_AS(alice.attack(5, RewardMatrix(3, 2)), std::logic_error);
}

TEST_CASE("pareto ucb attack on the two-arm fixture") {
  const auto g = make_gap_instance(2, 2, 0.1, 0.1);
  const std::size_t horizon = 100000;
  Environment env(g.spec, horizon, 31);
  ParetoUcbPolicy bob(2, 2, 0.1);
  ParetoUcbAttacker alice(2, 2, {0.1, 0.05, 0.1});
  Rng rng(31);
  std::vector<std::size_t> n(2, 0);
  for (std::size_t t = 1; t <= horizon; ++t) {
    const auto& r = env.step(t);
    const auto out = alice.attack(t, r);
    const std::size_t a = bob.select(rng);
    RewardVector received(r.row(a));
    received -= RewardVector::ones(2, out.alpha);
    bob.observe(a, received.view());
    alice.observe(a, r.row(a), out.alpha);
    ++n[a];
  }
  CHECK(static_cast<double>(n[0]) <= 2.0 + 9.0 * std::log(static_cast<double>(horizon)));
  CHECK(static_cast<double>(n[1]) / horizon > 0.95);
}

TEST_CASE("concentration monitor") {
  std::vector<RewardVector> mu{{0.5, 0.5}, {0.2, 0.2}};
  ConcentrationMonitor ok(mu, 0.1, 0.05);
  ok.observe(0, RewardVector{0.5, 0.5}.view());
  ok.observe(1, RewardVector{0.2, 0.2}.view());
  ok.observe(1, RewardVector{0.22, 0.18}.view());
  CHECK(ok.held());
  CHECK(ok.first_failure() == 0);

  ConcentrationMonitor bad(mu, 0.1, 0.05);
  bad.observe(0, RewardVector{0.5, 0.5}.view());
  bad.observe(0, RewardVector{0.5, 0.5}.view());
  bad.observe(1, RewardVector{0.9, 0.2}.view());  // 0.7 away, beyond beta(1)
  CHECK_FALSE(bad.held());
  CHECK(bad.first_failure() == 4);
}
