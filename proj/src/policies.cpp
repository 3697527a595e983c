#include "momab/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace momab {

namespace {

void check_bounded(double reward, const char* who) {
  if (!(reward >= 0.0 && reward <= 1.0))
    throw std::domain_error(std::string(who) + ": reward " + std::to_string(reward) + " outside [0, 1]");
}

void check_arm(std::size_t arm, std::size_t arms, const char* who) {
  if (arm >= arms) throw std::out_of_range(std::string(who) + ": arm index out of range");
}

std::size_t checked_dimension(std::size_t dimension, std::size_t dims, const char* who) {
  if (dims == 0) throw std::invalid_argument(std::string(who) + ": need at least one dimension");
  if (dimension >= dims) throw std::invalid_argument(std::string(who) + ": dimension out of range");
  return dimension;
}

double coordinate(std::span<const double> reward, std::size_t dimension, std::size_t dims) {
  if (reward.size() != dims) throw std::invalid_argument("reward vector has the wrong dimension");
  return reward[dimension];
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------

ScalarUcb::ScalarUcb(std::size_t arms, bool bounded) : counts_(arms, 0), sums_(arms, 0.0), bounded_(bounded) {
  if (arms == 0) throw std::invalid_argument("ScalarUcb: need at least one arm");
}

double ScalarUcb::index(std::size_t arm, std::size_t t) const {
  check_arm(arm, arms(), "ScalarUcb");
  if (counts_[arm] == 0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(counts_[arm]);
  return sums_[arm] / n + std::sqrt(2.0 * std::log(static_cast<double>(t)) / n);
}

std::size_t ScalarUcb::select() const {
  for (std::size_t i = 0; i < arms(); ++i)
    if (counts_[i] == 0) return i;
  const std::size_t t = steps_ + 1;
  std::size_t best = 0;
  double best_index = index(0, t);
  for (std::size_t i = 1; i < arms(); ++i) {
    const double u = index(i, t);
    if (u > best_index) {
      best = i;
      best_index = u;
    }
  }
  return best;
}

void ScalarUcb::update(std::size_t arm, double reward) {
  check_arm(arm, arms(), "ScalarUcb");
  if (bounded_) check_bounded(reward, "ScalarUcb");
  ++counts_[arm];
  sums_[arm] += reward;
  ++steps_;
}

// ---------------------------------------------------------------------------

ScalarExp3p::Tuning ScalarExp3p::tune(std::size_t arms, std::size_t horizon, double delta) {
  if (arms == 0) throw std::invalid_argument("ScalarExp3p: need at least one arm");
  if (horizon == 0) throw std::invalid_argument("ScalarExp3p: horizon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("ScalarExp3p: delta must lie in (0, 1)");
  const double k = static_cast<double>(arms);
  const double t = static_cast<double>(horizon);
  Tuning p;
  p.gamma = std::min(0.6, 2.0 * std::sqrt(3.0 * k * std::log(k) / (5.0 * t)));
  p.eta = p.gamma / (3.0 * k);
  p.beta = std::sqrt(std::log(k / delta) / (t * k));
  return p;
}

ScalarExp3p::ScalarExp3p(std::size_t arms, std::optional<std::size_t> horizon, double delta, bool bounded)
    : gains_(arms, 0.0), bounded_(bounded) {
  if (arms == 0) throw std::invalid_argument("ScalarExp3p: need at least one arm");
  if (horizon) tuning_ = tune(arms, *horizon, delta);
}

const ScalarExp3p::Tuning& ScalarExp3p::tuning() const {
  if (!tuning_) throw std::logic_error("ScalarExp3p: horizon T is required for the EXP3.P tuning");
  return *tuning_;
}

std::vector<double> ScalarExp3p::probabilities() const {
  const Tuning& p = tuning();
  const double k = static_cast<double>(arms());
  const double top = *std::max_element(gains_.begin(), gains_.end());
  std::vector<double> w(arms());
  double total = 0.0;
  for (std::size_t i = 0; i < arms(); ++i) total += w[i] = std::exp(p.eta * (gains_[i] - top));
  for (double& x : w) x = (1.0 - p.gamma) * x / total + p.gamma / k;
  return w;
}

std::size_t ScalarExp3p::select(Rng& rng) {
  last_probabilities_ = probabilities();
  return rng.categorical(last_probabilities_);
}

void ScalarExp3p::update(std::size_t arm, double reward) {
  check_arm(arm, arms(), "ScalarExp3p");
  if (bounded_) check_bounded(reward, "ScalarExp3p");
  if (last_probabilities_.empty()) last_probabilities_ = probabilities();
  const double beta = tuning().beta;
  for (std::size_t i = 0; i < arms(); ++i) {
    const double x = i == arm ? reward : 0.0;
    gains_[i] += (x + beta) / last_probabilities_[i];
  }
  last_probabilities_.clear();
}

// ---------------------------------------------------------------------------

namespace {

std::variant<ScalarUcb, ScalarExp3p> make_inner(int s, std::size_t arms, std::optional<std::size_t> horizon,
                                                double delta, bool bounded) {
  if (s == 0) return ScalarUcb(arms, bounded);
  if (s == 1) {
    if (!horizon) throw std::invalid_argument("mo_ks: s = 1 (EXP3.P) needs the horizon T");
    return ScalarExp3p(arms, horizon, delta, bounded);
  }
  throw std::invalid_argument("mo_ks: s must be 0 or 1");
}

}  // namespace

MoKsPolicy::MoKsPolicy(int s, std::size_t dimension, std::size_t arms, std::size_t dims,
                       std::optional<std::size_t> horizon, double delta, bool bounded)
    : s_(s),
      dimension_(checked_dimension(dimension, dims, "mo_ks")),
      dims_(dims),
      inner_(make_inner(s, arms, horizon, delta, bounded)) {}

std::size_t MoKsPolicy::select(Rng& rng) {
  if (auto* u = std::get_if<ScalarUcb>(&inner_)) return u->select();
  return std::get<ScalarExp3p>(inner_).select(rng);
}

void MoKsPolicy::observe(std::size_t arm, std::span<const double> reward) {
  const double x = coordinate(reward, dimension_, dims_);
  std::visit([&](auto& inner) { inner.update(arm, x); }, inner_);
}

ParameterList MoKsPolicy::parameters() const {
  ParameterList out{{"s", std::to_string(s_)}, {"dimension", std::to_string(dimension_ + 1)}};
  if (const auto* e = exp3p()) {
    out.emplace_back("exp3p_gamma", fmt(e->tuning().gamma));
    out.emplace_back("exp3p_eta", fmt(e->tuning().eta));
    out.emplace_back("exp3p_beta", fmt(e->tuning().beta));
  } else {
    out.emplace_back("ucb_bonus", "sqrt(2 ln t / N)");
  }
  return out;
}

// ---------------------------------------------------------------------------

MoUsPolicy::MoUsPolicy(std::size_t dimension, std::size_t arms, std::size_t dims, bool bounded, double c, double alpha)
    : dimension_(checked_dimension(dimension, dims, "mo_us")),
      dims_(dims),
      bounded_(bounded),
      c_(c),
      alpha_(alpha),
      losses_(arms, 0.0),
      counts_(arms, 0) {
  if (arms == 0) throw std::invalid_argument("mo_us: need at least one arm");
  if (!(c > 0.0 && alpha > 0.0)) throw std::invalid_argument("mo_us: c and alpha must be positive");
}

double MoUsPolicy::learning_rate(std::size_t t, std::size_t arms) {
  return 0.5 * std::sqrt(std::log(static_cast<double>(arms)) / (static_cast<double>(t) * static_cast<double>(arms)));
}

MoUsPolicy::Step MoUsPolicy::distribution(std::size_t t) const {
  const std::size_t k = losses_.size();
  if (t <= k || steps_ + 1 != t) throw std::logic_error("mo_us: distribution requested out of sequence");
  const double kd = static_cast<double>(k);
  const double lt = std::log(static_cast<double>(t));

  Step s;
  s.t = t;
  s.eta = learning_rate(t, k);
  s.ucb.resize(k);
  s.lcb.resize(k);
  for (std::size_t a = 0; a < k; ++a) {
    const double n = static_cast<double>(counts_[a]);
    const double mean = losses_[a] / n;
    const double r = std::sqrt(alpha_ * (lt + std::log(kd) / alpha_) / (2.0 * n));
    s.ucb[a] = std::clamp(mean + r, 0.0, 1.0);
    s.lcb[a] = std::clamp(mean - r, 0.0, 1.0);
  }
  const double min_ucb = *std::min_element(s.ucb.begin(), s.ucb.end());
  s.gap.resize(k);
  s.epsilon.resize(k);
  double eps_total = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    s.gap[a] = std::max(0.0, s.lcb[a] - min_ucb);
    const double psi = s.gap[a] > 0.0 ? c_ * lt / (static_cast<double>(t) * s.gap[a] * s.gap[a])
                                      : std::numeric_limits<double>::infinity();
    s.epsilon[a] = std::min({1.0 / (2.0 * kd), s.eta, psi});
    eps_total += s.epsilon[a];
  }

  const double low = *std::min_element(losses_.begin(), losses_.end());
  s.rho.resize(k);
  double z = 0.0;
  for (std::size_t a = 0; a < k; ++a) z += s.rho[a] = std::exp(-s.eta * (losses_[a] - low));
  for (double& p : s.rho) p /= z;

  s.rho_tilde.resize(k);
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) total += s.rho_tilde[a] = (1.0 - eps_total) * s.rho[a] + s.epsilon[a];
  if (std::abs(total - 1.0) > 1e-9) throw std::logic_error("mo_us: sampling distribution does not normalise");
  return s;
}

std::size_t MoUsPolicy::select(Rng& rng) {
  const std::size_t t = steps_ + 1;
  if (t <= losses_.size()) {
    last_ = Step{};
    last_.t = t;
    return t - 1;
  }
  last_ = distribution(t);
  return rng.categorical(last_.rho_tilde);
}

void MoUsPolicy::observe(std::size_t arm, std::span<const double> reward) {
  check_arm(arm, losses_.size(), "mo_us");
  const double x = coordinate(reward, dimension_, dims_);
  if (bounded_) check_bounded(x, "mo_us");
  const std::size_t t = steps_ + 1;
  if (t <= losses_.size()) {
    losses_[arm] += 1.0 - x;
  } else {
    if (last_.t != t) throw std::logic_error("mo_us: observe without a matching select");
    losses_[arm] += (1.0 - x) / last_.rho_tilde[arm];
  }
  ++counts_[arm];
  ++steps_;
}

ParameterList MoUsPolicy::parameters() const {
  return {{"dimension", std::to_string(dimension_ + 1)}, {"c", fmt(c_)}, {"alpha", fmt(alpha_)}};
}

// ---------------------------------------------------------------------------

RadiusKind parse_radius_kind(const std::string& name) {
  if (name == "three_sigma") return RadiusKind::ThreeSigma;
  if (name == "drugan") return RadiusKind::Drugan;
  throw std::invalid_argument("unknown radius kind '" + name + "'");
}

std::string to_string(RadiusKind kind) { return kind == RadiusKind::ThreeSigma ? "three_sigma" : "drugan"; }

ParetoUcbIndex::ParetoUcbIndex(std::size_t arms, std::size_t dims, double sigma, RadiusKind radius)
    : dims_(dims), sigma_(sigma), radius_(radius), counts_(arms, 0), sums_(arms * dims, 0.0) {
  if (arms == 0 || dims == 0) throw std::invalid_argument("pareto_ucb: need at least one arm and dimension");
  if (!(sigma >= 0.0)) throw std::invalid_argument("pareto_ucb: sigma must be non-negative");
}

bool ParetoUcbIndex::initialising() const noexcept {
  return std::find(counts_.begin(), counts_.end(), 0) != counts_.end();
}

std::size_t ParetoUcbIndex::next_unpulled() const {
  const auto it = std::find(counts_.begin(), counts_.end(), 0);
  if (it == counts_.end()) throw std::logic_error("pareto_ucb: every arm already pulled");
  return static_cast<std::size_t>(it - counts_.begin());
}

double ParetoUcbIndex::radius(std::size_t arm, std::size_t t) const {
  check_arm(arm, arms(), "pareto_ucb");
  if (counts_[arm] == 0) throw std::logic_error("pareto_ucb: radius of an unpulled arm");
  const double n = static_cast<double>(counts_[arm]);
  const double lt = std::log(static_cast<double>(t));
  if (radius_ == RadiusKind::ThreeSigma) return 3.0 * sigma_ * std::sqrt(lt / n);
  const double dk = static_cast<double>(dims_ * arms());
  return std::sqrt(2.0 * (lt + 0.25 * std::log(dk)) / n);
}

RewardVector ParetoUcbIndex::mean(std::size_t arm) const {
  check_arm(arm, arms(), "pareto_ucb");
  RewardVector m(dims_);
  if (counts_[arm] == 0) return m;
  const double n = static_cast<double>(counts_[arm]);
  for (std::size_t d = 0; d < dims_; ++d) m[d] = sums_[arm * dims_ + d] / n;
  return m;
}

std::vector<RewardVector> ParetoUcbIndex::index_vectors(std::size_t t) const {
  std::vector<RewardVector> out;
  out.reserve(arms());
  for (std::size_t i = 0; i < arms(); ++i) out.push_back(mean(i).shifted(radius(i, t)));
  return out;
}

ParetoFront ParetoUcbIndex::front(std::size_t t) const { return pareto_front(index_vectors(t)); }

void ParetoUcbIndex::update(std::size_t arm, std::span<const double> reward) {
  check_arm(arm, arms(), "pareto_ucb");
  if (reward.size() != dims_) throw std::invalid_argument("pareto_ucb: reward vector has the wrong dimension");
  for (std::size_t d = 0; d < dims_; ++d) sums_[arm * dims_ + d] += reward[d];
  ++counts_[arm];
  ++steps_;
}

ParetoUcbPolicy::ParetoUcbPolicy(std::size_t arms, std::size_t dims, double sigma, RadiusKind radius)
    : state_(arms, dims, sigma, radius) {}

std::size_t ParetoUcbPolicy::select(Rng& rng) {
  if (state_.initialising()) {
    last_front_ = ParetoFront{};
    return state_.next_unpulled();
  }
  last_front_ = state_.front(state_.steps() + 1);
  const auto& members = last_front_.members();
  return members[rng.below(members.size())].index;
}

void ParetoUcbPolicy::observe(std::size_t arm, std::span<const double> reward) { state_.update(arm, reward); }

ParameterList ParetoUcbPolicy::parameters() const {
  return {{"radius", to_string(state_.radius_kind())}, {"sigma", fmt(state_.sigma())}};
}

// ---------------------------------------------------------------------------

DimensionUcbPolicy::DimensionUcbPolicy(std::size_t dimension, std::size_t arms, std::size_t dims, bool bounded)
    : dimension_(checked_dimension(dimension, dims, "ucb")), dims_(dims), ucb_(arms, bounded) {}

void DimensionUcbPolicy::observe(std::size_t arm, std::span<const double> reward) {
  ucb_.update(arm, coordinate(reward, dimension_, dims_));
}

ParameterList DimensionUcbPolicy::parameters() const {
  return {{"dimension", std::to_string(dimension_ + 1)}, {"ucb_bonus", "sqrt(2 ln t / N)"}};
}

DimensionExp3pPolicy::DimensionExp3pPolicy(std::size_t dimension, std::size_t arms, std::size_t dims,
                                           std::optional<std::size_t> horizon, double delta, bool bounded)
    : dimension_(checked_dimension(dimension, dims, "exp3p")), dims_(dims), exp3p_(arms, horizon, delta, bounded) {
  if (!horizon) throw std::invalid_argument("exp3p: needs the horizon T");
}

void DimensionExp3pPolicy::observe(std::size_t arm, std::span<const double> reward) {
  exp3p_.update(arm, coordinate(reward, dimension_, dims_));
}

ParameterList DimensionExp3pPolicy::parameters() const {
  return {{"dimension", std::to_string(dimension_ + 1)},
          {"exp3p_gamma", fmt(exp3p_.tuning().gamma)},
          {"exp3p_eta", fmt(exp3p_.tuning().eta)},
          {"exp3p_beta", fmt(exp3p_.tuning().beta)}};
}

}  // namespace momab
