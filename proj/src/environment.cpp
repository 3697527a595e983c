#include "momab/environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace momab {

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "truncated_gaussian") return NoiseKind::TruncatedGaussian;
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "bernoulli") return NoiseKind::BernoulliPerDim;
  throw std::invalid_argument("unknown noise kind '" + name + "'");
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::TruncatedGaussian: return "truncated_gaussian";
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::BernoulliPerDim: return "bernoulli";
  }
  return "?";
}

void StochasticSpec::validate() const {
  if (means.empty()) throw std::invalid_argument("stochastic spec: no arms");
  const std::size_t d = dims();
  if (d == 0) throw std::invalid_argument("stochastic spec: zero dimensions");
  for (const auto& mu : means) {
    if (mu.size() != d) throw std::invalid_argument("stochastic spec: ragged means");
    for (double v : mu)
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("stochastic spec: mean outside [0,1]");
  }
  if (!(sigma >= 0.0)) throw std::invalid_argument("stochastic spec: sigma must be non-negative");
}

ObliviousSequence::ObliviousSequence(std::size_t horizon, std::size_t arms, std::size_t dims)
    : horizon_(horizon), arms_(arms), dims_(dims), data_(horizon * arms * dims, 0.0) {
  if (horizon == 0 || arms == 0 || dims == 0) throw std::invalid_argument("oblivious sequence: empty shape");
}

std::size_t ObliviousSequence::index(std::size_t t, std::size_t arm, std::size_t d) const {
  if (t < 1 || t > horizon_ || arm >= arms_ || d >= dims_)
    throw std::out_of_range("oblivious sequence: index out of range");
  return ((t - 1) * arms_ + arm) * dims_ + d;
}

double& ObliviousSequence::at(std::size_t t, std::size_t arm, std::size_t d) { return data_[index(t, arm, d)]; }
double ObliviousSequence::at(std::size_t t, std::size_t arm, std::size_t d) const {
  return data_[index(t, arm, d)];
}

RewardMatrix ObliviousSequence::matrix(std::size_t t) const {
  RewardMatrix m(arms_, dims_);
  const std::size_t offset = index(t, 0, 0);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(offset), arms_ * dims_, m.row(0).data());
  return m;
}

std::size_t AdversarySpec::arms() const {
  return std::visit(
      [](const auto& s) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ObliviousSequence>) return s.arms();
        else return s.arms;
      },
      source);
}

std::size_t AdversarySpec::dims() const {
  return std::visit(
      [](const auto& s) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ObliviousSequence>) return s.dims();
        else return s.dims;
      },
      source);
}

Environment::Environment(StochasticSpec spec, std::size_t horizon, std::uint64_t seed)
    : arms_(spec.arms()), dims_(spec.dims()), horizon_(horizon), rng_(seed, Stream::Environment) {
  spec.validate();
  if (horizon == 0) throw std::invalid_argument("environment: horizon must be positive");
  spec_ = std::move(spec);
  current_ = RewardMatrix(arms_, dims_);
}

Environment::Environment(AdversarySpec spec, std::size_t horizon)
    : arms_(spec.arms()), dims_(spec.dims()), horizon_(horizon), rng_(0, Stream::Environment) {
  if (horizon == 0) throw std::invalid_argument("environment: horizon must be positive");
  if (const auto* seq = std::get_if<ObliviousSequence>(&spec.source); seq && seq->horizon() < horizon)
    throw std::invalid_argument("environment: oblivious sequence shorter than the horizon");
  if (const auto* adaptive = std::get_if<AdaptiveAdversary>(&spec.source); adaptive && !adaptive->generate)
    throw std::invalid_argument("environment: adaptive adversary without a generator");
  spec_ = std::move(spec);
  current_ = RewardMatrix(arms_, dims_);
}

EnvironmentKind Environment::kind() const noexcept {
  if (std::holds_alternative<StochasticSpec>(spec_)) return EnvironmentKind::Stochastic;
  return std::get<AdversarySpec>(spec_).oblivious() ? EnvironmentKind::Oblivious : EnvironmentKind::Adaptive;
}

bool Environment::bounded() const noexcept {
  if (const auto* s = std::get_if<StochasticSpec>(&spec_)) return s->noise != NoiseKind::Gaussian || s->sigma == 0.0;
  return true;
}

std::optional<std::vector<RewardVector>> Environment::means() const {
  if (const auto* s = std::get_if<StochasticSpec>(&spec_)) return s->means;
  return std::nullopt;
}

const RewardMatrix& Environment::step(std::size_t t, std::span<const std::size_t> past_pulls) {
  if (t < 1 || t > horizon_) throw std::out_of_range("environment: step outside [1, T]");
  if (auto* s = std::get_if<StochasticSpec>(&spec_)) {
    for (std::size_t i = 0; i < arms_; ++i) {
      for (std::size_t d = 0; d < dims_; ++d) {
        const double mu = s->means[i][d];
        double r = mu;
        switch (s->noise) {
          case NoiseKind::TruncatedGaussian: r = truncated_gaussian(rng_, mu, s->sigma); break;
          case NoiseKind::Gaussian: r = s->sigma > 0.0 ? mu + s->sigma * rng_.normal() : mu; break;
          case NoiseKind::BernoulliPerDim: r = rng_.uniform() < mu ? 1.0 : 0.0; break;
        }
        current_(i, d) = r;
      }
    }
    return current_;
  }
  auto& adversary = std::get<AdversarySpec>(spec_);
  if (auto* seq = std::get_if<ObliviousSequence>(&adversary.source)) {
    current_ = seq->matrix(t);
  } else {
    auto& adaptive = std::get<AdaptiveAdversary>(adversary.source);
    RewardMatrix m = adaptive.generate(t, past_pulls);
    if (m.arms() != arms_ || m.dims() != dims_)
      throw std::logic_error("environment: adaptive generator returned a wrongly shaped matrix");
    for (double v : m.flat())
      if (!(v >= 0.0 && v <= 1.0)) throw std::logic_error("environment: adaptive reward outside [0,1]");
    current_ = std::move(m);
  }
  return current_;
}

ObliviousSequence load_oblivious_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open oblivious sequence '" + path.string() + "'");

  struct Entry {
    std::size_t t, arm, dim;
    double value;
  };
  std::vector<Entry> entries;
  std::size_t horizon = 0, arms = 0, dims = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (line_no == 1 && line.rfind("t,", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    long long t = 0, arm = 0, dim = 0;
    double value = 0.0;
    if (!(fields >> t >> arm >> dim >> value) || t < 1 || arm < 1 || dim < 1)
      throw std::runtime_error("oblivious sequence: malformed line " + std::to_string(line_no));
    if (!(value >= 0.0 && value <= 1.0))
      throw std::runtime_error("oblivious sequence: value outside [0,1] on line " + std::to_string(line_no));
    entries.push_back({static_cast<std::size_t>(t), static_cast<std::size_t>(arm - 1),
                       static_cast<std::size_t>(dim - 1), value});
    horizon = std::max(horizon, static_cast<std::size_t>(t));
    arms = std::max(arms, static_cast<std::size_t>(arm));
    dims = std::max(dims, static_cast<std::size_t>(dim));
  }
  if (entries.empty()) throw std::runtime_error("oblivious sequence: no data");
  if (entries.size() != horizon * arms * dims)
    throw std::runtime_error("oblivious sequence: tensor is incomplete (expected t*arm*dim entries)");

  ObliviousSequence seq(horizon, arms, dims);
  std::vector<bool> seen(horizon * arms * dims, false);
  for (const auto& e : entries) {
    const std::size_t flat = ((e.t - 1) * arms + e.arm) * dims + e.dim;
    if (seen[flat]) throw std::runtime_error("oblivious sequence: duplicate entry");
    seen[flat] = true;
    seq.at(e.t, e.arm, e.dim) = e.value;
  }
  return seq;
}

void save_oblivious_csv(const ObliviousSequence& sequence, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << "t,arm,dim,value\n";
  char buf[64];
  for (std::size_t t = 1; t <= sequence.horizon(); ++t)
    for (std::size_t i = 0; i < sequence.arms(); ++i)
      for (std::size_t d = 0; d < sequence.dims(); ++d) {
        std::snprintf(buf, sizeof buf, "%.17g", sequence.at(t, i, d));
        out << t << ',' << i + 1 << ',' << d + 1 << ',' << buf << '\n';
      }
}

AdversarySpec make_degenerate(const std::vector<std::vector<double>>& base, std::size_t dims) {
  if (base.empty() || base.front().empty()) throw std::invalid_argument("make_degenerate: empty base");
  if (dims == 0) throw std::invalid_argument("make_degenerate: zero dimensions");
  const std::size_t arms = base.front().size();
  ObliviousSequence seq(base.size(), arms, dims);
  for (std::size_t t = 0; t < base.size(); ++t) {
    if (base[t].size() != arms) throw std::invalid_argument("make_degenerate: ragged base");
    for (std::size_t i = 0; i < arms; ++i) {
      const double r = base[t][i];
      if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("make_degenerate: base value outside [0,1]");
      for (std::size_t d = 0; d < dims; ++d) seq.at(t + 1, i, d) = r;
    }
  }
  return AdversarySpec{std::move(seq)};
}

StochasticSpec make_constant_mean_degenerate(std::span<const double> means, std::size_t dims, double sigma,
                                             NoiseKind noise) {
  if (means.empty()) throw std::invalid_argument("make_constant_mean_degenerate: no arms");
  StochasticSpec spec;
  spec.noise = noise;
  spec.sigma = sigma;
  for (double m : means) spec.means.push_back(RewardVector::ones(dims, m));
  spec.validate();
  return spec;
}

GapInstance make_gap_instance(std::size_t arms, std::size_t dims, double gamma, double sigma, NoiseKind noise,
                              std::optional<double> margin, double top, double spread) {
  if (arms < 2) throw std::invalid_argument("make_gap_instance: need at least two arms");
  if (dims == 0) throw std::invalid_argument("make_gap_instance: zero dimensions");
  if (!(gamma > 0.0 && gamma < 0.2)) throw std::invalid_argument("make_gap_instance: gamma must lie in (0, 1/5)");
  if (arms > 2 && dims < 2)
    throw std::invalid_argument("make_gap_instance: more than one front arm needs at least two dimensions");
  const double m = margin.value_or(5.0 * gamma);
  if (m < 5.0 * gamma) throw std::invalid_argument("make_gap_instance: margin below 5*gamma");

  GapInstance g;
  g.gamma = gamma;
  g.margin = m;
  g.spec.noise = noise;
  g.spec.sigma = sigma;
  const std::size_t front = arms - 1;
  for (std::size_t i = 0; i < front; ++i) {
    RewardVector mu = RewardVector::ones(dims, top);
    mu[0] = top - spread * static_cast<double>(i);
    if (dims > 1) mu[1] = top - spread * static_cast<double>(front - 1 - i);
    g.spec.means.push_back(std::move(mu));
  }
  RewardVector target(dims, std::numeric_limits<double>::infinity());
  for (const auto& mu : g.spec.means)
    for (std::size_t d = 0; d < dims; ++d) target[d] = std::min(target[d], mu[d]);
  for (double& v : target) v -= m;
  g.spec.means.push_back(target);

  for (const auto& mu : g.spec.means)
    for (double v : mu)
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("make_gap_instance: construction leaves [0,1]; reduce margin or spread");

  for (const auto& mu : g.spec.means) {
    double delta = 0.0;
    for (std::size_t d = 0; d < dims; ++d) delta = std::max(delta, mu[d] - target[d]);
    g.deltas.push_back(delta);
  }
  g.spec.validate();
  return g;
}

AdversarySpec make_bernoulli_degenerate(std::span<const double> probabilities, std::size_t horizon,
                                        std::size_t dims, std::uint64_t fixture_seed) {
  Rng rng(fixture_seed, Stream::Fixture);
  std::vector<std::vector<double>> base(horizon, std::vector<double>(probabilities.size()));
  for (auto& row : base)
    for (std::size_t i = 0; i < probabilities.size(); ++i) row[i] = rng.uniform() < probabilities[i] ? 1.0 : 0.0;
  return make_degenerate(base, dims);
}

AdversarySpec make_least_pulled_adversary(std::size_t arms, std::size_t dims, double high, double low) {
  if (arms == 0 || dims == 0) throw std::invalid_argument("least-pulled adversary: empty shape");
  AdaptiveAdversary adversary;
  adversary.arms = arms;
  adversary.dims = dims;
  // counts are kept incrementally; each copy of the generator carries its own tally
  adversary.generate = [arms, dims, high, low, counts = std::vector<std::size_t>(arms, 0),
                        seen = std::size_t{0}](std::size_t, std::span<const std::size_t> past) mutable {
    if (past.size() < seen) {
      std::fill(counts.begin(), counts.end(), 0);
      seen = 0;
    }
    for (; seen < past.size(); ++seen) ++counts.at(past[seen]);
    const auto favoured = static_cast<std::size_t>(
        std::distance(counts.begin(), std::min_element(counts.begin(), counts.end())));
    RewardMatrix m(arms, dims, low);
    for (std::size_t d = 0; d < dims; ++d) m(favoured, d) = high;
    return m;
  };
  return AdversarySpec{std::move(adversary)};
}

}  // namespace momab
