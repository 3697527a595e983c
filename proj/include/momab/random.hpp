#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace momab {

// Independent generator streams of one run; each consumer owns its own stream so that,
// for example, the environment draws do not depend on which policy is being run.
enum class Stream : std::uint32_t { Environment = 1, Policy = 2, Shadow = 3, Fixture = 4 };

class Rng {
 public:
  explicit Rng(std::uint64_t seed, Stream stream = Stream::Policy);

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n).
  std::size_t below(std::size_t n);
  double normal();
  // Sample an index from a probability vector (weights need not be normalised).
  std::size_t categorical(std::span<const double> weights);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// N(mean, sigma^2) restricted to the symmetric window [mean - w, mean + w] with
// w = min(mean, 1 - mean), so draws stay in [0, 1] and keep the mean exactly.
double truncated_gaussian(Rng& rng, double mean, double sigma);

}  // namespace momab
