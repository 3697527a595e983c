#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace momab {

// A D-dimensional reward (or mean, or cumulative reward) vector.
class RewardVector {
 public:
  RewardVector() = default;
  explicit RewardVector(std::size_t dims, double fill = 0.0) : values_(dims, fill) {}
  explicit RewardVector(std::vector<double> values) : values_(std::move(values)) {}
  RewardVector(std::initializer_list<double> values) : values_(values) {}
  explicit RewardVector(std::span<const double> values) : values_(values.begin(), values.end()) {}

  // The all-ones vector scaled by `value`.
  static RewardVector ones(std::size_t dims, double value = 1.0) { return RewardVector(dims, value); }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double operator[](std::size_t d) const { return values_[d]; }
  double& operator[](std::size_t d) { return values_[d]; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }
  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }

  std::span<const double> view() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  RewardVector& operator+=(std::span<const double> other) {
    check_same_size(other.size());
    for (std::size_t d = 0; d < values_.size(); ++d) values_[d] += other[d];
    return *this;
  }
  RewardVector& operator+=(const RewardVector& other) { return *this += other.view(); }
  RewardVector& operator-=(const RewardVector& other) {
    check_same_size(other.size());
    for (std::size_t d = 0; d < values_.size(); ++d) values_[d] -= other[d];
    return *this;
  }
  RewardVector& operator*=(double scale) {
    for (double& v : values_) v *= scale;
    return *this;
  }

  // this + shift * 1
  RewardVector shifted(double shift) const {
    RewardVector out(*this);
    for (double& v : out.values_) v += shift;
    return out;
  }

  friend RewardVector operator+(RewardVector a, const RewardVector& b) { return a += b; }
  friend RewardVector operator-(RewardVector a, const RewardVector& b) { return a -= b; }
  friend RewardVector operator*(RewardVector a, double s) { return a *= s; }
  friend RewardVector operator*(double s, RewardVector a) { return a *= s; }
  friend bool operator==(const RewardVector&, const RewardVector&) = default;

 private:
  void check_same_size(std::size_t n) const {
    if (n != values_.size()) throw std::invalid_argument("RewardVector: dimension mismatch");
  }

  std::vector<double> values_;
};

}  // namespace momab
