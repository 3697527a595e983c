#include <cmath>
#include <filesystem>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "momab/environment.hpp"
#include "momab/pareto.hpp"
#include "momab/random.hpp"

using namespace momab;

TEST_CASE("zero noise reproduces the means") {
  StochasticSpec spec{{{0.2, 0.8}, {0.5, 0.5}}, NoiseKind::TruncatedGaussian, 0.0};
  Environment env(spec, 5, 1);
  for (std::size_t t = 1; t <= 5; ++t) {
    const auto& r = env.step(t);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t d = 0; d < 2; ++d) CHECK(r(i, d) == spec.means[i][d]);
  }
}

TEST_CASE("stochastic draws are reproducible and independent of the caller") {
  StochasticSpec spec{{{0.3, 0.7}, {0.9, 0.1}}, NoiseKind::TruncatedGaussian, 0.2};
  Environment a(spec, 50, 77), b(spec, 50, 77), c(spec, 50, 78);
  bool differs = false;
  for (std::size_t t = 1; t <= 50; ++t) {
    const RewardMatrix ra = a.step(t);
    CHECK(ra == b.step(t));
    differs = differs || !(ra == c.step(t));
  }
  CHECK(differs);
}

TEST_CASE("truncated gaussian stays in [0,1] and keeps the mean") {
  Rng rng(5, Stream::Environment);
  for (double mu : {0.05, 0.4, 0.5, 0.93}) {
    double sum = 0.0;
    const int n = 40000;
    for (int k = 0; k < n; ++k) {
      const double x = truncated_gaussian(rng, mu, 0.1);
      REQUIRE(x >= 0.0);
      REQUIRE(x <= 1.0);
      REQUIRE(std::abs(x - mu) <= std::min(mu, 1.0 - mu) + 1e-12);
      sum += x;
    }
    // symmetric truncation: the sample mean is within a few standard errors of mu
    CHECK(std::abs(sum / n - mu) < 5.0 * 0.1 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("gaussian environment has the configured spread") {
  StochasticSpec spec{{{0.5}}, NoiseKind::Gaussian, 0.1};
  Environment env(spec, 20000, 3);
  CHECK_FALSE(env.bounded());
  double s = 0.0, s2 = 0.0;
  for (std::size_t t = 1; t <= 20000; ++t) {
    const double x = env.step(t)(0, 0);
    s += x, s2 += x * x;
  }
  const double m = s / 20000, var = s2 / 20000 - m * m;
  CHECK(std::abs(m - 0.5) < 5.0 * 0.1 / std::sqrt(20000.0));
  CHECK(std::sqrt(var) == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("oblivious sequence replays and round-trips through csv") {
  ObliviousSequence seq(3, 2, 2);
  double v = 0.0;
  for (std::size_t t = 1; t <= 3; ++t)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t d = 0; d < 2; ++d) seq.at(t, i, d) = (v += 0.0625);
  Environment env(AdversarySpec{seq}, 3);
  CHECK(env.kind() == EnvironmentKind::Oblivious);
  const RewardMatrix first = env.step(2);
  CHECK(first == env.step(2));
  CHECK(first(1, 0) == seq.at(2, 1, 0));

  const auto path = std::filesystem::temp_directory_path() / "momab_unit_seq.csv";
  save_oblivious_csv(seq, path);
  const auto back = load_oblivious_csv(path);
  REQUIRE(back.horizon() == 3);
  REQUIRE(back.arms() == 2);
  REQUIRE(back.dims() == 2);
  for (std::size_t t = 1; t <= 3; ++t) CHECK(back.matrix(t) == seq.matrix(t));
  std::filesystem::remove(path);
  CHECK_THROWS(load_oblivious_csv(path));
  CHECK_THROWS_AS(Environment(AdversarySpec{seq}, 4), std::invalid_argument);
}

TEST_CASE("make_degenerate copies the scalar into every coordinate") {
  const auto spec = make_degenerate({{0.7, 0.2}, {0.1, 0.4}}, 3);
  Environment env(spec, 2);
  const auto& r = env.step(1);
  for (std::size_t d = 0; d < 3; ++d) CHECK(r(0, d) == 0.7);
  CHECK_THROWS(make_degenerate({{1.5}}, 2));

  // D = 1 is the identity
  Environment one(make_degenerate({{0.3, 0.6}}, 1), 1);
  CHECK(one.step(1).row(1).size() == 1);
  CHECK(one.step(1)(1, 0) == 0.6);

  // distinct cumulative sums: the front of the sums is the argmax arm alone
  std::vector<RewardVector> sums(2, RewardVector(3));
  Environment two(spec, 2);
  for (std::size_t t = 1; t <= 2; ++t)
    for (std::size_t i = 0; i < 2; ++i) sums[i] += two.step(t).row(i);
  CHECK(pareto_front(sums).indices() == std::vector<std::size_t>{0});
}

TEST_CASE("constant-mean degenerate instance") {
  const double theta = 1.0 / 48.0;
  const std::vector<double> mu{0.5, 0.5 - theta};
  const auto spec = make_constant_mean_degenerate(mu, 2, 0.0);
  REQUIRE(spec.arms() == 2);
  CHECK(spec.means[1] == RewardVector{0.5 - theta, 0.5 - theta});
  Environment env(spec, 3, 9);
  CHECK(env.step(1)(0, 0) == env.step(1)(0, 1));
  CHECK(pareto_front(spec.means).indices() == std::vector<std::size_t>{0});

  // with noise the coordinates are drawn independently
  Environment noisy(make_constant_mean_degenerate(mu, 2, 0.1), 3, 9);
  CHECK(noisy.step(1)(0, 0) != noisy.step(1)(0, 1));
}

TEST_CASE("gap instance construction") {
  const auto g = make_gap_instance(2, 2, 0.1, 0.1);
  CHECK(g.spec.means[0] == RewardVector{0.9, 0.9});
  CHECK(g.spec.means[1][0] == doctest::Approx(0.4));
  CHECK(g.spec.means[1][1] == doctest::Approx(0.4));
  CHECK(g.margin == doctest::Approx(0.5));
  CHECK(g.deltas[0] == doctest::Approx(0.5));
  CHECK(g.deltas[1] == 0.0);
  CHECK_THROWS_AS(make_gap_instance(2, 2, 0.1, 0.1, NoiseKind::Gaussian, 0.49), std::invalid_argument);
  CHECK_THROWS_AS(make_gap_instance(2, 2, 0.25, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_gap_instance(2, 2, 0.19, 0.1, NoiseKind::Gaussian, {}, 0.9, 0.1), std::invalid_argument);

  for (std::size_t k : {2u, 3u, 5u, 8u}) {
    const auto gk = make_gap_instance(k, 3, 0.1, 0.1, NoiseKind::Gaussian, {}, 0.95, 0.05);
    const auto f = pareto_front(gk.spec.means);
    CHECK(f.size() == k - 1);
    CHECK_FALSE(f.contains(k - 1));
    CHECK(dist(gk.spec.means.back(), f) >= 5 * 0.1 - 1e-12);
    for (std::size_t i = 0; i + 1 < k; ++i)
      for (std::size_t d = 0; d < 3; ++d) CHECK(gk.spec.means[i][d] - gk.spec.means.back()[d] >= 0.5 - 1e-12);
  }
}

TEST_CASE("bernoulli degenerate sequence is fixed by the fixture seed") {
  const std::vector<double> p{0.8, 0.2};
  const auto a = make_bernoulli_degenerate(p, 2000, 2, 7);
  const auto b = make_bernoulli_degenerate(p, 2000, 2, 7);
  const auto& sa = std::get<ObliviousSequence>(a.source);
  const auto& sb = std::get<ObliviousSequence>(b.source);
  double ones = 0.0;
  for (std::size_t t = 1; t <= 2000; ++t) {
    CHECK(sa.matrix(t) == sb.matrix(t));
    CHECK(sa.at(t, 0, 0) == sa.at(t, 0, 1));
    ones += sa.at(t, 0, 0);
  }
  CHECK(ones / 2000 == doctest::Approx(0.8).epsilon(0.05));
}

TEST_CASE("least-pulled adversary pays the least pulled arm") {
  Environment env(make_least_pulled_adversary(3, 2, 1.0, 0.3), 10);
  CHECK(env.kind() == EnvironmentKind::Adaptive);
  std::vector<std::size_t> past;
  CHECK(env.step(1, past)(0, 0) == 1.0);
  past = {0, 0, 1};
  const auto& r = env.step(4, past);
  CHECK(r(2, 1) == 1.0);
  CHECK(r(0, 0) == 0.3);
  CHECK(r(1, 0) == 0.3);
  CHECK_FALSE(env.means().has_value());
}
