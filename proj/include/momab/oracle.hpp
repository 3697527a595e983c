#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "momab/reward_vector.hpp"

namespace momab {

// O(n^2) reference: indices not strictly dominated by any other vector.
std::vector<std::size_t> pareto_front_pairwise(std::span<const RewardVector> vectors);

struct OracleSummary {
  std::size_t dist_pairs = 0;
  double dist_max_error = 0.0;
  double dist_seconds = 0.0;
  std::size_t front_sets = 0;
  std::size_t front_mismatches = 0;

  bool passed(double tolerance = 1e-4) const { return dist_max_error <= tolerance && front_mismatches == 0; }
};

// Random (a, front) pairs with D <= 4, |front| <= 6 and a strictly below every member,
// compared against the grid oracle; random sets with n <= 20, D <= 5 compared against the
// pairwise front.
OracleSummary run_oracle_suite(std::uint64_t seed, std::size_t pairs = 1000, std::size_t sets = 1000,
                               double grid_step = 1e-4);

}  // namespace momab
