#include "momab/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace momab {

namespace {

std::mt19937_64 seeded(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

Rng::Rng(std::uint64_t seed, Stream stream) : engine_(seeded(seed, stream)) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: empty range");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

double Rng::normal() { return normal_(engine_); }

std::size_t Rng::categorical(std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("Rng::categorical: no weights");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("Rng::categorical: weights sum to zero");
  const double u = uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  // u landed in the rounding slack above the last partial sum
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return i;
  return weights.size() - 1;
}

double truncated_gaussian(Rng& rng, double mean, double sigma) {
  const double half_width = std::min(mean, 1.0 - mean);
  if (sigma <= 0.0 || half_width <= 0.0) return mean;
  const double z = half_width / sigma;
  if (z >= 1.0) {
    // acceptance >= 68%
    for (;;) {
      const double x = rng.normal();
      if (std::abs(x) <= z) return mean + sigma * x;
    }
  }
  const double lo = std_normal_cdf(-z);
  const double hi = std_normal_cdf(z);
  const double u = lo + (hi - lo) * rng.uniform();
  const double x = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
  return std::clamp(mean + sigma * x, mean - half_width, mean + half_width);
}

}  // namespace momab
