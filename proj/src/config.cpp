#include "momab/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace momab {

namespace pt = boost::property_tree;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

class Section {
 public:
  Section(const pt::ptree& root, std::string name) : name_(std::move(name)) {
    if (auto child = root.get_child_optional(name_)) tree_ = *child;
  }

  bool has(const std::string& key) const { return tree_.find(key) != tree_.not_found(); }

  std::optional<std::string> raw(const std::string& key) {
    known_.insert(key);
    auto it = tree_.find(key);
    if (it == tree_.not_found()) return std::nullopt;
    return boost::trim_copy(it->second.data());
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    auto v = raw(key);
    return v ? convert<T>(key, *v) : fallback;
  }

  template <class T>
  std::optional<T> maybe(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    return convert<T>(key, *v);
  }

  std::vector<double> list(const std::string& key) {
    std::vector<double> out;
    if (auto v = raw(key)) out = parse_list(key, *v);
    return out;
  }

  // rows separated by '|', values by commas or whitespace
  std::vector<RewardVector> matrix(const std::string& key) {
    std::vector<RewardVector> out;
    auto v = raw(key);
    if (!v) return out;
    std::vector<std::string> rows;
    boost::split(rows, *v, boost::is_any_of("|"));
    for (const auto& r : rows) out.emplace_back(parse_list(key, r));
    return out;
  }

  void reject_unknown() const {
    for (const auto& kv : tree_)
      if (!known_.count(kv.first))
        throw std::invalid_argument("config: unknown key '" + kv.first + "' in section [" + name_ + "]");
  }

 private:
  template <class T>
  T convert(const std::string& key, const std::string& value) const {
    if constexpr (std::is_same_v<T, bool>) {
      const std::string v = boost::to_lower_copy(value);
      if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
      if (v == "false" || v == "no" || v == "off" || v == "0") return false;
      fail(key, value);
    } else if constexpr (std::is_same_v<T, std::string>) {
      return value;
    } else {
      if constexpr (std::is_unsigned_v<T>)
        if (!value.empty() && value.front() == '-') fail(key, value);
      try {
        return boost::lexical_cast<T>(value);
      } catch (const boost::bad_lexical_cast&) {
        fail(key, value);
      }
    }
    return T{};
  }

  std::vector<double> parse_list(const std::string& key, const std::string& text) const {
    std::vector<std::string> parts;
    boost::split(parts, text, boost::is_any_of(", \t"), boost::token_compress_on);
    std::vector<double> out;
    for (auto& p : parts) {
      boost::trim(p);
      if (!p.empty()) out.push_back(convert<double>(key, p));
    }
    if (out.empty()) throw std::invalid_argument("config: [" + name_ + "] " + key + " is empty");
    return out;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& value) const {
    throw std::invalid_argument("config: [" + name_ + "] " + key + " = '" + value + "' is not valid");
  }

  std::string name_;
  pt::ptree tree_;
  std::set<std::string> known_;
};

std::size_t one_based(const std::string& what, std::size_t v) {
  if (v < 1) throw std::invalid_argument("config: " + what + " is 1-based");
  return v - 1;
}

}  // namespace

const std::vector<std::string>& known_scenarios() {
  static const std::vector<std::string> names{"stochastic_log", "adversarial_sqrt", "attack", "robustness",
                                              "degenerate"};
  return names;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree root;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  for (const auto& kv : root) {
    static const std::set<std::string> sections{"experiment", "environment", "policy", "attack"};
    if (!sections.count(kv.first)) throw std::invalid_argument("config: unknown section [" + kv.first + "]");
  }

  ExperimentConfig c;
  Section ex(root, "experiment");
  c.scenario = ex.get<std::string>("scenario", c.scenario);
  c.horizon = ex.get<std::size_t>("horizon", c.horizon);
  c.replications = ex.get<std::size_t>("replications", c.replications);
  c.seed = ex.get<std::uint64_t>("seed", c.seed);
  c.checkpoints = ex.get<std::string>("checkpoints", c.checkpoints);
  ex.reject_unknown();

  Section env(root, "environment");
  auto& e = c.environment;
  e.kind = env.get<std::string>("kind", e.kind);
  e.means = env.matrix("means");
  e.scalars = env.list("values");
  e.arms = env.get<std::size_t>("arms", e.arms);
  e.dims = env.get<std::size_t>("dims", e.dims);
  e.gamma = env.get<double>("gamma", e.gamma);
  e.margin = env.maybe<double>("margin");
  e.top = env.get<double>("top", e.top);
  e.spread = env.get<double>("spread", e.spread);
  e.noise = parse_noise_kind(env.get<std::string>("noise", to_string(e.noise)));
  e.sigma = env.get<double>("sigma", e.sigma);
  e.fixture_seed = env.get<std::uint64_t>("fixture_seed", e.fixture_seed);
  if (auto p = env.maybe<std::string>("path")) {
    e.path = *p;
    if (e.path.is_relative() && !base_dir.empty()) e.path = base_dir / e.path;
  }
  e.high = env.get<double>("high", e.high);
  e.low = env.get<double>("low", e.low);
  env.reject_unknown();

  Section pol(root, "policy");
  auto& p = c.policy;
  p.kind = pol.get<std::string>("kind", p.kind);
  p.s = pol.get<int>("s", p.s);
  p.dimension = one_based("[policy] dimension", pol.get<std::size_t>("dimension", 1));
  p.radius = parse_radius_kind(pol.get<std::string>("radius", to_string(p.radius)));
  p.sigma = pol.maybe<double>("sigma");
  p.delta = pol.get<double>("delta", p.delta);
  pol.reject_unknown();

  Section at(root, "attack");
  auto& a = c.attack;
  a.enabled = at.get<bool>("enabled", root.get_child_optional("attack").has_value());
  a.kind = at.get<std::string>("kind", a.kind);
  a.delta0 = at.get<double>("delta0", a.delta0);
  a.delta = at.get<double>("delta", a.delta);
  a.sigma = at.maybe<double>("sigma");
  a.victim = at.get<std::string>("victim", a.victim);
  a.dimension = one_based("[attack] dimension", at.get<std::size_t>("dimension", 1));
  at.reject_unknown();

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

void validate(const ExperimentConfig& c) {
  const auto& names = known_scenarios();
  if (std::find(names.begin(), names.end(), c.scenario) == names.end())
    throw std::invalid_argument("config: unknown scenario '" + c.scenario + "'");
  if (c.horizon < 1) throw std::invalid_argument("config: horizon must be at least 1");
  if (c.replications < 1) throw std::invalid_argument("config: replications must be at least 1");
  if (c.checkpoints != "geometric") {
    bool ok = c.checkpoints.rfind("every:", 0) == 0;
    if (ok) {
      try {
        ok = std::stoll(c.checkpoints.substr(6)) > 0;
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) throw std::invalid_argument("config: checkpoints must be 'geometric' or 'every:<n>'");
  }

  static const std::set<std::string> env_kinds{"stochastic",    "gap",          "constant_mean",
                                               "bernoulli_degenerate", "oblivious_csv", "least_pulled"};
  if (!env_kinds.count(c.environment.kind))
    throw std::invalid_argument("config: unknown environment kind '" + c.environment.kind + "'");
  if (!(c.environment.sigma >= 0.0)) throw std::invalid_argument("config: [environment] sigma must be >= 0");

  static const std::set<std::string> policy_kinds{"mo_ks", "mo_us", "pareto_ucb", "ucb", "exp3p"};
  if (!policy_kinds.count(c.policy.kind))
    throw std::invalid_argument("config: unknown policy kind '" + c.policy.kind + "'");
  if (c.policy.kind == "mo_ks" && c.policy.s != 0 && c.policy.s != 1)
    throw std::invalid_argument("config: [policy] s must be 0 or 1");
  if (!(c.policy.delta > 0.0 && c.policy.delta < 1.0))
    throw std::invalid_argument("config: [policy] delta must lie in (0, 1)");

  if (c.attack.enabled) {
    if (c.attack.kind != "pareto_ucb" && c.attack.kind != "ucb")
      throw std::invalid_argument("config: [attack] kind must be pareto_ucb or ucb");
    if (c.attack.victim != "player" && c.attack.victim != "shadow")
      throw std::invalid_argument("config: [attack] victim must be player or shadow");
    if (!(c.attack.delta0 > 0.0)) throw std::invalid_argument("config: [attack] delta0 must be positive");
    if (!(c.attack.delta > 0.0 && c.attack.delta < 1.0))
      throw std::invalid_argument("config: [attack] delta must lie in (0, 1)");
    if (c.attack.victim == "player") {
      if (c.attack.kind == "pareto_ucb" && c.policy.kind != "pareto_ucb")
        throw std::invalid_argument("config: the pareto_ucb attack needs a pareto_ucb player (or victim = shadow)");
      if (c.attack.kind == "ucb" &&
          !(c.policy.kind == "ucb" || (c.policy.kind == "mo_ks" && c.policy.s == 0)))
        throw std::invalid_argument("config: the ucb attack needs a UCB player (or victim = shadow)");
      if (c.attack.kind == "ucb" && c.attack.dimension != c.policy.dimension)
        throw std::invalid_argument("config: the ucb attack must target the player's dimension");
    }
  }
  const bool attack_scenario = c.scenario == "attack" || c.scenario == "robustness";
  if (attack_scenario && !c.attack.enabled)
    throw std::invalid_argument("config: scenario '" + c.scenario + "' needs [attack] enabled = true");
}

void validate(const ExperimentConfig& c, std::size_t arms, std::size_t dims) {
  validate(c);
  if (c.policy.dimension >= dims) throw std::invalid_argument("config: [policy] dimension exceeds D");
  if (c.attack.enabled) {
    if (arms < 2) throw std::invalid_argument("config: attacks need at least two arms");
    if (c.horizon <= 2 * arms) throw std::invalid_argument("config: attacks need T > 2K");
    if (c.attack.dimension >= dims) throw std::invalid_argument("config: [attack] dimension exceeds D");
  }
}

std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](std::string k, std::string v) { out.emplace_back(std::move(k), std::move(v)); };
  add("experiment.scenario", c.scenario);
  add("experiment.horizon", std::to_string(c.horizon));
  add("experiment.replications", std::to_string(c.replications));
  add("experiment.seed", std::to_string(c.seed));
  add("experiment.checkpoints", c.checkpoints);

  const auto& e = c.environment;
  add("environment.kind", e.kind);
  if (!e.means.empty()) {
    std::string m;
    for (std::size_t i = 0; i < e.means.size(); ++i) {
      if (i) m += " | ";
      for (std::size_t d = 0; d < e.means[i].size(); ++d) m += (d ? "," : "") + num(e.means[i][d]);
    }
    add("environment.means", m);
  }
  if (!e.scalars.empty()) {
    std::string m;
    for (std::size_t i = 0; i < e.scalars.size(); ++i) m += (i ? "," : "") + num(e.scalars[i]);
    add("environment.values", m);
  }
  if (e.kind == "gap") {
    add("environment.arms", std::to_string(e.arms));
    add("environment.gamma", num(e.gamma));
    add("environment.margin", e.margin ? num(*e.margin) : "5*gamma");
    add("environment.top", num(e.top));
    add("environment.spread", num(e.spread));
  }
  if (e.dims) add("environment.dims", std::to_string(e.dims));
  add("environment.noise", to_string(e.noise));
  add("environment.sigma", num(e.sigma));
  if (e.kind == "bernoulli_degenerate") add("environment.fixture_seed", std::to_string(e.fixture_seed));
  if (e.kind == "oblivious_csv") add("environment.path", e.path.string());
  if (e.kind == "least_pulled") {
    add("environment.high", num(e.high));
    add("environment.low", num(e.low));
  }

  const auto& p = c.policy;
  add("policy.kind", p.kind);
  if (p.kind == "mo_ks") add("policy.s", std::to_string(p.s));
  add("policy.dimension", std::to_string(p.dimension + 1));
  if (p.kind == "pareto_ucb") {
    add("policy.radius", to_string(p.radius));
    add("policy.sigma", num(c.policy_sigma()));
  }
  if (p.kind == "exp3p" || (p.kind == "mo_ks" && p.s == 1)) add("policy.delta", num(p.delta));
  if (p.kind == "mo_us") {
    add("policy.c", "256");
    add("policy.alpha", "3");
  }

  const auto& a = c.attack;
  add("attack.enabled", a.enabled ? "true" : "false");
  if (a.enabled) {
    add("attack.kind", a.kind);
    add("attack.delta0", num(a.delta0));
    add("attack.delta", num(a.delta));
    add("attack.sigma", num(c.attack_sigma()));
    add("attack.victim", a.victim);
    add("attack.target", "K (last arm)");
    if (a.kind == "ucb") add("attack.dimension", std::to_string(a.dimension + 1));
    add("attack.warm_start", "2K");
  }
  return out;
}

}  // namespace momab
