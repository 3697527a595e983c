#include "momab/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "momab/pareto.hpp"
#include "momab/random.hpp"

namespace momab {

std::vector<std::size_t> pareto_front_pairwise(std::span<const RewardVector> vectors) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < vectors.size() && !dominated; ++j)
      dominated = j != i && dominates(vectors[j].view(), vectors[i].view());
    if (!dominated) out.push_back(i);
  }
  return out;
}

OracleSummary run_oracle_suite(std::uint64_t seed, std::size_t pairs, std::size_t sets, double grid_step) {
  Rng rng(seed, Stream::Fixture);
  OracleSummary s;

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t n = 0; n < pairs; ++n) {
    const std::size_t dims = 1 + rng.below(4);
    const std::size_t size = 1 + rng.below(6);
    std::vector<RewardVector> pts;
    for (std::size_t i = 0; i < size; ++i) {
      RewardVector v(dims);
      for (auto& x : v) x = rng.uniform();
      pts.push_back(std::move(v));
    }
    const ParetoFront front = pareto_front(pts);
    RewardVector a(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      double lo = 1.0;
      for (const auto& m : front.members()) lo = std::min(lo, m.vector[d]);
      a[d] = lo - 0.01 - 0.5 * rng.uniform();
    }
    const double err = std::abs(dist(a, front) - dist_oracle(a.view(), front, grid_step));
    s.dist_max_error = std::max(s.dist_max_error, err);
    ++s.dist_pairs;
  }
  s.dist_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  for (std::size_t n = 0; n < sets; ++n) {
    const std::size_t dims = 1 + rng.below(5);
    const std::size_t size = 1 + rng.below(20);
    std::vector<RewardVector> pts;
    for (std::size_t i = 0; i < size; ++i) {
      RewardVector v(dims);
      // coarse grid so that ties and duplicates actually occur
      for (auto& x : v) x = static_cast<double>(rng.below(5)) / 4.0;
      pts.push_back(std::move(v));
    }
    if (pareto_front(pts).indices() != pareto_front_pairwise(pts)) ++s.front_mismatches;
    ++s.front_sets;
  }
  return s;
}

}  // namespace momab
