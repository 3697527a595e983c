#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "momab/reward_vector.hpp"

namespace momab {

// Pareto order between an ordered pair (a, b). Coordinate comparisons are exact.
enum class Dominance {
  Dominates,          // a >= b everywhere, > somewhere
  WeaklyDominates,    // never produced by compare(): Equal and Dominates cover it
  Equal,
  DominatedBy,
  WeaklyDominatedBy,  // never produced by compare()
  Incomparable,       // a > b somewhere and a < b somewhere
};

std::string_view to_string(Dominance relation) noexcept;

// Mirror image of a relation: compare(b, a) == mirror(compare(a, b)).
Dominance mirror(Dominance relation) noexcept;

Dominance compare(std::span<const double> a, std::span<const double> b);
inline Dominance compare(const RewardVector& a, const RewardVector& b) { return compare(a.view(), b.view()); }

bool weakly_dominates(std::span<const double> a, std::span<const double> b);
bool dominates(std::span<const double> a, std::span<const double> b);
bool incomparable(std::span<const double> a, std::span<const double> b);
// a_d > b_d for some d.
bool non_dominated_by(std::span<const double> a, std::span<const double> b);

struct FrontMember {
  std::size_t index;
  RewardVector vector;
};

class ParetoFront {
 public:
  ParetoFront() = default;
  explicit ParetoFront(std::vector<FrontMember> members);

  const std::vector<FrontMember>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t dims() const noexcept { return members_.empty() ? 0 : members_.front().vector.size(); }

  std::vector<std::size_t> indices() const;
  bool contains(std::size_t index) const;

  // Front built directly from a list of vectors, indices 0..n-1, without filtering.
  static ParetoFront from_vectors(std::span<const RewardVector> vectors);

 private:
  std::vector<FrontMember> members_;  // sorted by index
};

// All indices i such that no j has vectors[j] strictly dominating vectors[i].
// Exact duplicates of a maximal vector are all kept.
ParetoFront pareto_front(std::span<const RewardVector> vectors);

// Pareto distance of `a` to `front`: the smallest uniform shift eps >= 0 after which
// a + eps*1 is no longer strictly dominated by any front member,
//   max(0, max_sigma min_d (sigma_d - a_d)).
double dist(std::span<const double> a, const ParetoFront& front);
inline double dist(const RewardVector& a, const ParetoFront& front) { return dist(a.view(), front); }

// Unclamped max_sigma min_d (sigma_d - a_d).
double signed_dist(std::span<const double> a, const ParetoFront& front);

// min_d max_sigma (sigma_d - a_d), clamped at 0. Upper bound on dist(); the two agree
// on singleton fronts.
double minimax_gap(std::span<const double> a, const ParetoFront& front);

// Brute-force grid evaluation of the incomparability definition of the distance; a test
// oracle for dist(). Scans eps = k*grid_step up to max_{sigma,d}(sigma_d - a_d) and
// returns the first eps with a + eps*1 incomparable with every front member. If no grid
// point qualifies it returns the first eps at which a + eps*1 stops being strictly
// dominated by every member.
double dist_oracle(std::span<const double> a, const ParetoFront& front, double grid_step = 1e-4);

}  // namespace momab
