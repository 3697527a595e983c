#include "momab/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace momab {

namespace {

void require_same_dims(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("pareto: dimension mismatch");
}

void require_front(std::span<const double> a, const ParetoFront& front) {
  if (front.empty()) throw std::invalid_argument("pareto: empty front");
  require_same_dims(a.size(), front.dims());
}

}  // namespace

std::string_view to_string(Dominance relation) noexcept {
  switch (relation) {
    case Dominance::Dominates: return "Dominates";
    case Dominance::WeaklyDominates: return "WeaklyDominates";
    case Dominance::Equal: return "Equal";
    case Dominance::DominatedBy: return "DominatedBy";
    case Dominance::WeaklyDominatedBy: return "WeaklyDominatedBy";
    case Dominance::Incomparable: return "Incomparable";
  }
  return "?";
}

Dominance mirror(Dominance relation) noexcept {
  switch (relation) {
    case Dominance::Dominates: return Dominance::DominatedBy;
    case Dominance::DominatedBy: return Dominance::Dominates;
    case Dominance::WeaklyDominates: return Dominance::WeaklyDominatedBy;
    case Dominance::WeaklyDominatedBy: return Dominance::WeaklyDominates;
    case Dominance::Equal:
    case Dominance::Incomparable: return relation;
  }
  return relation;
}

Dominance compare(std::span<const double> a, std::span<const double> b) {
  require_same_dims(a.size(), b.size());
  bool greater = false;
  bool less = false;
  for (std::size_t d = 0; d < a.size(); ++d) {
    if (a[d] > b[d]) greater = true;
    else if (a[d] < b[d]) less = true;
  }
  if (greater && less) return Dominance::Incomparable;
  if (greater) return Dominance::Dominates;
  if (less) return Dominance::DominatedBy;
  return Dominance::Equal;
}

bool weakly_dominates(std::span<const double> a, std::span<const double> b) {
  const Dominance r = compare(a, b);
  return r == Dominance::Dominates || r == Dominance::Equal;
}

bool dominates(std::span<const double> a, std::span<const double> b) {
  return compare(a, b) == Dominance::Dominates;
}

bool incomparable(std::span<const double> a, std::span<const double> b) {
  return compare(a, b) == Dominance::Incomparable;
}

bool non_dominated_by(std::span<const double> a, std::span<const double> b) {
  require_same_dims(a.size(), b.size());
  for (std::size_t d = 0; d < a.size(); ++d)
    if (a[d] > b[d]) return true;
  return false;
}

ParetoFront::ParetoFront(std::vector<FrontMember> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end(),
            [](const FrontMember& x, const FrontMember& y) { return x.index < y.index; });
  for (const auto& m : members_) require_same_dims(m.vector.size(), dims());
}

std::vector<std::size_t> ParetoFront::indices() const {
  std::vector<std::size_t> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.index);
  return out;
}

bool ParetoFront::contains(std::size_t index) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), index,
                             [](const FrontMember& m, std::size_t i) { return m.index < i; });
  return it != members_.end() && it->index == index;
}

ParetoFront ParetoFront::from_vectors(std::span<const RewardVector> vectors) {
  std::vector<FrontMember> members;
  members.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) members.push_back({i, vectors[i]});
  return ParetoFront(std::move(members));
}

// Sort-and-sweep: in descending lexicographic order a vector can only be strictly
// dominated by one that precedes it, and by transitivity checking against the maximal
// vectors kept so far is enough.
ParetoFront pareto_front(std::span<const RewardVector> vectors) {
  if (vectors.empty()) throw std::invalid_argument("pareto_front: empty input");
  const std::size_t dims = vectors.front().size();
  for (const auto& v : vectors) require_same_dims(v.size(), dims);

  std::vector<std::size_t> order(vectors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::lexicographical_compare(vectors[j].begin(), vectors[j].end(), vectors[i].begin(),
                                        vectors[i].end());
  });

  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    const bool beaten = std::any_of(kept.begin(), kept.end(), [&](std::size_t j) {
      return dominates(vectors[j].view(), vectors[i].view());
    });
    if (!beaten) kept.push_back(i);
  }

  std::vector<FrontMember> members;
  members.reserve(kept.size());
  for (std::size_t i : kept) members.push_back({i, vectors[i]});
  return ParetoFront(std::move(members));
}

double signed_dist(std::span<const double> a, const ParetoFront& front) {
  require_front(a, front);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& m : front.members()) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < a.size(); ++d) worst = std::min(worst, m.vector[d] - a[d]);
    best = std::max(best, worst);
  }
  return best;
}

double dist(std::span<const double> a, const ParetoFront& front) {
  return std::max(0.0, signed_dist(a, front));
}

double minimax_gap(std::span<const double> a, const ParetoFront& front) {
  require_front(a, front);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < a.size(); ++d) {
    double widest = -std::numeric_limits<double>::infinity();
    for (const auto& m : front.members()) widest = std::max(widest, m.vector[d] - a[d]);
    best = std::min(best, widest);
  }
  return std::max(0.0, best);
}

double dist_oracle(std::span<const double> a, const ParetoFront& front, double grid_step) {
  require_front(a, front);
  if (!(grid_step > 0.0)) throw std::invalid_argument("dist_oracle: grid_step must be positive");

  double limit = 0.0;
  for (const auto& m : front.members())
    for (std::size_t d = 0; d < a.size(); ++d) limit = std::max(limit, m.vector[d] - a[d]);

  std::vector<double> shifted(a.begin(), a.end());
  auto shift_to = [&](double eps) {
    for (std::size_t d = 0; d < a.size(); ++d) shifted[d] = a[d] + eps;
  };
  const auto steps = static_cast<std::size_t>(std::ceil(limit / grid_step)) + 1;

  for (std::size_t k = 0; k <= steps; ++k) {
    const double eps = static_cast<double>(k) * grid_step;
    shift_to(eps);
    const bool all_incomparable = std::all_of(front.members().begin(), front.members().end(),
                                              [&](const FrontMember& m) {
                                                return incomparable(shifted, m.vector.view());
                                              });
    if (all_incomparable) return eps;
  }
  for (std::size_t k = 0; k <= steps; ++k) {
    const double eps = static_cast<double>(k) * grid_step;
    shift_to(eps);
    const bool undominated = std::none_of(front.members().begin(), front.members().end(),
                                          [&](const FrontMember& m) {
                                            return dominates(m.vector.view(), shifted);
                                          });
    if (undominated) return eps;
  }
  return limit;
}

}  // namespace momab
