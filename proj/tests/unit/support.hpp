#pragma once

// Hand-rolled generators and independent reference implementations shared by the unit tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "momab/reward_vector.hpp"

namespace testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::size_t between(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  // Values on a coarse grid so that ties and duplicates actually happen.
  double coarse(int steps = 4) { return static_cast<double>(between(0, steps)) / steps; }

  momab::RewardVector vector(std::size_t dims, double lo = 0.0, double hi = 1.0) {
    momab::RewardVector v(dims);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }
  std::vector<momab::RewardVector> vectors(std::size_t n, std::size_t dims) {
    std::vector<momab::RewardVector> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(vector(dims));
    return out;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Strict Pareto dominance written out from the definition.
inline bool strictly_dominates(const momab::RewardVector& a, const momab::RewardVector& b) {
  bool strict = false;
  for (std::size_t d = 0; d < a.size(); ++d) {
    if (a[d] < b[d]) return false;
    if (a[d] > b[d]) strict = true;
  }
  return strict;
}

inline std::vector<std::size_t> reference_front(const std::vector<momab::RewardVector>& v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < v.size() && !dominated; ++j) dominated = strictly_dominates(v[j], v[i]);
    if (!dominated) out.push_back(i);
  }
  return out;
}

// Smallest eps on a fine grid after which a + eps*1 is strictly dominated by no member.
inline double reference_dist(const momab::RewardVector& a, const std::vector<momab::RewardVector>& front,
                             double step = 1e-5) {
  auto blocked = [&](double eps) {
    momab::RewardVector p = a.shifted(eps);
    for (const auto& s : front)
      if (strictly_dominates(s, p)) return true;
    return false;
  };
  double hi = 0.0;
  for (const auto& s : front)
    for (std::size_t d = 0; d < a.size(); ++d) hi = std::max(hi, s[d] - a[d]);
  for (std::size_t k = 0;; ++k) {
    const double eps = step * static_cast<double>(k);
    if (eps > hi + step) return hi;
    if (!blocked(eps)) return eps;
  }
}

}  // namespace testing
