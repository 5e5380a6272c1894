#include "exo/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "exo/errors.hpp"
#include "exo/tabular_planner.hpp"

namespace exo {

using nlohmann::json;

namespace {

const std::set<std::string>& algorithms_for(ExperimentKind kind) {
  static const std::set<std::string> tabular{"pto", "pto_opt", "pto_lite", "ftl_erm"};
  static const std::set<std::string> storage{"lsvi_pe", "lsvi_opt", "lsvi_lite"};
  static const std::set<std::string> bandit{"ftl", "ucb"};
  static const std::set<std::string> peg{"peg"};
  switch (kind) {
    case ExperimentKind::tabular: return tabular;
    case ExperimentKind::storage: return storage;
    case ExperimentKind::bandit: return bandit;
    case ExperimentKind::peg: return peg;
  }
  return peg;
}

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError(field + ": " + message);
}

void reject_unknown(const json& obj, const std::string& section, std::initializer_list<const char*> known) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(section.empty() ? key : section + "." + key, "unknown field");
  }
}

template <class T>
void read(const json& obj, const char* key, T& target, const std::string& section) {
  if (!obj.contains(key)) return;
  const std::string field = section.empty() ? key : section + "." + key;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(field, std::string("wrong type (") + e.what() + ")");
  }
}

void require(bool cond, const std::string& field, const std::string& message) {
  if (!cond) fail(field, message);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::tabular: return "tabular";
    case ExperimentKind::storage: return "storage";
    case ExperimentKind::bandit: return "bandit";
    case ExperimentKind::peg: return "peg";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
  if (name == "tabular") return ExperimentKind::tabular;
  if (name == "storage") return ExperimentKind::storage;
  if (name == "bandit") return ExperimentKind::bandit;
  if (name == "peg" || name == "peg-demo") return ExperimentKind::peg;
  return std::nullopt;
}

AlgorithmLabel parse_algorithm_label(std::string_view label) {
  AlgorithmLabel out;
  const auto at = label.find('@');
  out.base = std::string(label.substr(0, at));
  if (at != std::string_view::npos) {
    const std::string tail(label.substr(at + 1));
    char* end = nullptr;
    const double ratio = std::strtod(tail.c_str(), &end);
    if (tail.empty() || end != tail.c_str() + tail.size()) {
      throw ConfigError("algorithms: bad ratio suffix in '" + std::string(label) + "'");
    }
    out.ratio = ratio;
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_range(std::string_view text) {
  auto parse_u64 = [&](std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ConfigError("seeds: cannot parse '" + std::string(text) + "'");
    }
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) return {parse_u64(text)};
  const std::uint64_t lo = parse_u64(text.substr(0, dots));
  const std::uint64_t hi = parse_u64(text.substr(dots + 2));
  if (hi < lo) throw ConfigError("seeds: empty range '" + std::string(text) + "'");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  return seeds;
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  finalize_config(cfg);
  return cfg;
}

void finalize_config(ExperimentConfig& cfg) {
  const auto kind = cfg.experiment;
  if (cfg.algorithms.empty()) {
    switch (kind) {
      case ExperimentKind::tabular: cfg.algorithms = {"pto", "pto_opt"}; break;
      case ExperimentKind::storage: cfg.algorithms = {"lsvi_pe", "lsvi_opt"}; break;
      case ExperimentKind::bandit: cfg.algorithms = {"ftl", "ucb"}; break;
      case ExperimentKind::peg: cfg.algorithms = {"peg"}; break;
    }
  }
  if (cfg.episodes == 0) {
    switch (kind) {
      case ExperimentKind::tabular: cfg.episodes = 250; break;
      case ExperimentKind::storage: cfg.episodes = 100; break;
      case ExperimentKind::bandit: cfg.episodes = 500; break;
      case ExperimentKind::peg: cfg.episodes = 1000; break;
    }
  }
  if (cfg.seeds.empty()) cfg.seeds = parse_seed_range("0..19");
  if (cfg.params.c == 0.0 && kind == ExperimentKind::tabular) cfg.params.c = 0.3;
  if (cfg.params.c == 0.0 && kind == ExperimentKind::storage) cfg.params.c = 0.5;
  if (cfg.storage.prices.empty()) {
    for (int r = 0; r < cfg.storage.num_prices; ++r) cfg.storage.prices.push_back(r + 1.0);
  }
  if (cfg.storage.start_levels.empty()) {
    for (int i = 0; i < 5; ++i) cfg.storage.start_levels.push_back(i * cfg.storage.capacity / 4.0);
  }
  if (cfg.bandit.delta == 0.0 && cfg.episodes > 0) cfg.bandit.delta = 1.0 / cfg.episodes;

  require(cfg.episodes >= 1, "episodes", "must be >= 1");
  require(!cfg.seeds.empty(), "seeds", "must be nonempty");
  require(cfg.threads >= 0, "threads", "must be >= 0");
  const auto& valid = algorithms_for(kind);
  for (const auto& name : cfg.algorithms) {
    const auto label = parse_algorithm_label(name);
    if (!valid.count(label.base)) {
      fail("algorithms", "'" + name + "' is not valid for experiment " + std::string(to_string(kind)));
    }
    if (label.ratio) {
      require(label.base.ends_with("_lite"), "algorithms", "only *_lite accepts a @ratio suffix");
      require(*label.ratio > 0.0 && *label.ratio <= 1.0, "algorithms", "subsample ratio must be in (0,1]");
    }
  }
  std::set<std::string> unique(cfg.algorithms.begin(), cfg.algorithms.end());
  require(unique.size() == cfg.algorithms.size(), "algorithms", "duplicate entries");

  const auto& t = cfg.tabular;
  require(t.num_x >= 1, "tabular.num_x", "must be >= 1");
  require(t.num_xi >= 1, "tabular.num_xi", "must be >= 1");
  require(t.num_a >= 1, "tabular.num_a", "must be >= 1");
  require(t.horizon >= 1, "tabular.horizon", "must be >= 1");
  require(t.dirichlet_alpha > 0.0, "tabular.dirichlet_alpha", "must be positive");
  require(t.x1 >= 0 && t.x1 < t.num_x, "tabular.x1", "must index an endogenous state");
  require(t.memory == 0 || t.memory == 1, "tabular.memory",
          "only 0 (i.i.d.) and 1 (Markov) are supported; higher memory blows up the policy space");

  const auto& s = cfg.storage;
  require(s.horizon >= 1, "storage.horizon", "must be >= 1");
  require(s.num_prices >= 2, "storage.num_prices", "must be >= 2");
  require(s.num_anchors >= 2, "storage.num_anchors", "must be >= 2");
  require(s.capacity > 0.0, "storage.capacity", "must be positive");
  require(s.a_max > 0.0, "storage.a_max", "must be positive");
  require(s.eta_plus > 0.0, "storage.eta_plus", "must be positive");
  require(s.eta_minus > 0.0, "storage.eta_minus", "must be positive");
  require(s.leakage > 0.0 && s.leakage <= 1.0, "storage.leakage", "must lie in (0,1]");
  require(s.trans_cost >= 0.0, "storage.trans_cost", "must be nonnegative");
  require(s.holding >= 0.0, "storage.holding", "must be nonnegative");
  require(s.reward_sign == 1.0 || s.reward_sign == -1.0, "storage.reward_sign", "must be +1 or -1");
  require(s.prices.size() == static_cast<std::size_t>(s.num_prices), "storage.prices",
          "must have num_prices entries");
  require(!s.start_levels.empty(), "storage.start_levels", "must be nonempty");
  for (double x : s.start_levels) {
    require(x >= 0.0 && x <= s.capacity, "storage.start_levels", "levels must lie in [0, capacity]");
  }
  require(s.eval_rollouts >= 1, "storage.eval_rollouts", "must be >= 1");
  require(s.oracle_anchor_factor >= 1, "storage.oracle_anchor_factor", "must be >= 1");

  const auto& b = cfg.bandit;
  require(b.num_arms >= 1, "bandit.num_arms", "must be >= 1");
  require(b.gap > 0.0 && b.gap <= 0.5, "bandit.gap", "must lie in (0, 0.5]");
  require(b.num_outcomes >= 2, "bandit.num_outcomes", "must be >= 2");
  require(b.sigma > 0.0, "bandit.sigma", "must be positive");
  require(b.delta > 0.0 && b.delta < 1.0 + 1e-12, "bandit.delta", "must lie in (0,1]");

  const auto& p = cfg.peg;
  require(p.means.size() >= 2, "peg.means", "need at least two arms");
  for (double m : p.means) require(m >= 0.0 && m <= 1.0, "peg.means", "must lie in [0,1]");
  require(p.warm_start >= 1, "peg.warm_start", "must be >= 1");
  if (kind == ExperimentKind::peg) {
    require(cfg.episodes >= static_cast<int>(p.means.size()) * p.warm_start, "episodes",
            "must cover the warm-start phase");
  }

  const auto& a = cfg.params;
  require(a.c >= 0.0, "params.c", "must be nonnegative");
  require(a.delta > 0.0 && a.delta < 1.0, "params.delta", "must lie in (0,1)");
  require(a.subsample_ratio > 0.0 && a.subsample_ratio <= 1.0, "params.subsample_ratio", "must lie in (0,1]");
  require(a.policy_cap >= 1, "params.policy_cap", "must be >= 1");
  require(a.regret_mode == "summed" || a.regret_mode == "fixed", "params.regret_mode",
          "must be 'summed' or 'fixed'");
  require(a.regret_x1 >= 0 && a.regret_x1 < t.num_x, "params.regret_x1", "must index an endogenous state");
  require(a.regret_xi1 >= 0 && a.regret_xi1 < t.num_xi, "params.regret_xi1", "must index an exogenous state");

  if (kind == ExperimentKind::tabular) {
    for (const auto& name : cfg.algorithms) {
      if (parse_algorithm_label(name).base != "ftl_erm") continue;
      const double size = policy_space_size({t.horizon, t.num_x, t.num_xi, t.num_a});
      if (size > static_cast<double>(a.policy_cap)) {
        fail("algorithms", "ftl_erm needs " + std::to_string(size) + " policies, above params.policy_cap = " +
                               std::to_string(a.policy_cap));
      }
    }
  }
}

ExperimentConfig parse_config(std::string_view json_text, std::optional<ExperimentKind> fallback_kind) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(doc, "", {"experiment", "algorithms", "episodes", "seeds", "tabular", "storage", "bandit",
                           "peg", "params", "output_dir", "threads", "record_timing", "plots"});

  ExperimentConfig cfg;
  if (doc.contains("experiment")) {
    std::string name;
    read(doc, "experiment", name, "");
    const auto kind = parse_experiment_kind(name);
    if (!kind) fail("experiment", "unknown experiment '" + name + "'");
    cfg.experiment = *kind;
  } else if (fallback_kind) {
    cfg.experiment = *fallback_kind;
  } else {
    fail("experiment", "missing");
  }

  read(doc, "algorithms", cfg.algorithms, "");
  read(doc, "episodes", cfg.episodes, "");
  if (doc.contains("episodes") && cfg.episodes < 1) fail("episodes", "must be >= 1");
  if (doc.contains("seeds")) {
    const auto& s = doc.at("seeds");
    if (s.is_string()) {
      cfg.seeds = parse_seed_range(s.get<std::string>());
    } else {
      read(doc, "seeds", cfg.seeds, "");
      if (cfg.seeds.empty()) fail("seeds", "must be nonempty");
    }
  }
  read(doc, "output_dir", cfg.output_dir, "");
  read(doc, "threads", cfg.threads, "");
  read(doc, "record_timing", cfg.record_timing, "");
  read(doc, "plots", cfg.plots, "");

  auto section = [&](const char* name) -> const json* {
    if (!doc.contains(name)) return nullptr;
    if (!doc.at(name).is_object()) fail(name, "must be an object");
    return &doc.at(name);
  };

  if (const json* t = section("tabular")) {
    reject_unknown(*t, "tabular", {"num_x", "num_xi", "num_a", "horizon", "dirichlet_alpha", "x1", "memory"});
    read(*t, "num_x", cfg.tabular.num_x, "tabular");
    read(*t, "num_xi", cfg.tabular.num_xi, "tabular");
    read(*t, "num_a", cfg.tabular.num_a, "tabular");
    read(*t, "horizon", cfg.tabular.horizon, "tabular");
    read(*t, "dirichlet_alpha", cfg.tabular.dirichlet_alpha, "tabular");
    read(*t, "x1", cfg.tabular.x1, "tabular");
    read(*t, "memory", cfg.tabular.memory, "tabular");
  }
  if (const json* s = section("storage")) {
    reject_unknown(*s, "storage",
                   {"horizon", "num_prices", "num_anchors", "capacity", "a_max", "eta_plus", "eta_minus",
                    "leakage", "trans_cost", "holding", "reward_sign", "effective_trade", "prices",
                    "start_levels", "eval_rollouts", "oracle_anchor_factor"});
    auto& st = cfg.storage;
    read(*s, "horizon", st.horizon, "storage");
    read(*s, "num_prices", st.num_prices, "storage");
    read(*s, "num_anchors", st.num_anchors, "storage");
    read(*s, "capacity", st.capacity, "storage");
    read(*s, "a_max", st.a_max, "storage");
    read(*s, "eta_plus", st.eta_plus, "storage");
    read(*s, "eta_minus", st.eta_minus, "storage");
    read(*s, "leakage", st.leakage, "storage");
    read(*s, "trans_cost", st.trans_cost, "storage");
    read(*s, "holding", st.holding, "storage");
    read(*s, "reward_sign", st.reward_sign, "storage");
    read(*s, "effective_trade", st.effective_trade, "storage");
    read(*s, "prices", st.prices, "storage");
    read(*s, "start_levels", st.start_levels, "storage");
    read(*s, "eval_rollouts", st.eval_rollouts, "storage");
    read(*s, "oracle_anchor_factor", st.oracle_anchor_factor, "storage");
  }
  if (const json* b = section("bandit")) {
    reject_unknown(*b, "bandit", {"num_arms", "gap", "num_outcomes", "sigma", "delta"});
    read(*b, "num_arms", cfg.bandit.num_arms, "bandit");
    read(*b, "gap", cfg.bandit.gap, "bandit");
    read(*b, "num_outcomes", cfg.bandit.num_outcomes, "bandit");
    read(*b, "sigma", cfg.bandit.sigma, "bandit");
    read(*b, "delta", cfg.bandit.delta, "bandit");
  }
  if (const json* p = section("peg")) {
    reject_unknown(*p, "peg", {"means", "warm_start", "per_round_records"});
    read(*p, "means", cfg.peg.means, "peg");
    read(*p, "warm_start", cfg.peg.warm_start, "peg");
    read(*p, "per_round_records", cfg.peg.per_round_records, "peg");
  }
  if (const json* a = section("params")) {
    reject_unknown(*a, "params",
                   {"c", "delta", "subsample_ratio", "policy_cap", "regret_mode", "regret_x1", "regret_xi1"});
    read(*a, "c", cfg.params.c, "params");
    if (a->contains("c") && !(cfg.params.c > 0.0)) {
      // An explicit zero is meaningful (no optimism); keep it distinct from "unset".
      if (cfg.params.c < 0.0) fail("params.c", "must be nonnegative");
    }
    read(*a, "delta", cfg.params.delta, "params");
    read(*a, "subsample_ratio", cfg.params.subsample_ratio, "params");
    read(*a, "policy_cap", cfg.params.policy_cap, "params");
    read(*a, "regret_mode", cfg.params.regret_mode, "params");
    read(*a, "regret_x1", cfg.params.regret_x1, "params");
    read(*a, "regret_xi1", cfg.params.regret_xi1, "params");
  }

  const bool explicit_zero_c = doc.contains("params") && doc.at("params").contains("c") && cfg.params.c == 0.0;
  finalize_config(cfg);
  if (explicit_zero_c) cfg.params.c = 0.0;
  return cfg;
}

ExperimentConfig load_config(const std::string& path, std::optional<ExperimentKind> fallback_kind) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), fallback_kind);
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["experiment"] = std::string(to_string(cfg.experiment));
  doc["algorithms"] = cfg.algorithms;
  doc["episodes"] = cfg.episodes;
  doc["seeds"] = cfg.seeds;
  doc["output_dir"] = cfg.output_dir;
  doc["threads"] = cfg.threads;
  doc["record_timing"] = cfg.record_timing;
  doc["plots"] = cfg.plots;
  const auto& t = cfg.tabular;
  doc["tabular"] = {{"num_x", t.num_x}, {"num_xi", t.num_xi}, {"num_a", t.num_a}, {"horizon", t.horizon},
                    {"dirichlet_alpha", t.dirichlet_alpha}, {"x1", t.x1}, {"memory", t.memory}};
  const auto& s = cfg.storage;
  doc["storage"] = {{"horizon", s.horizon},
                    {"num_prices", s.num_prices},
                    {"num_anchors", s.num_anchors},
                    {"capacity", s.capacity},
                    {"a_max", s.a_max},
                    {"eta_plus", s.eta_plus},
                    {"eta_minus", s.eta_minus},
                    {"leakage", s.leakage},
                    {"trans_cost", s.trans_cost},
                    {"holding", s.holding},
                    {"reward_sign", s.reward_sign},
                    {"effective_trade", s.effective_trade},
                    {"prices", s.prices},
                    {"start_levels", s.start_levels},
                    {"eval_rollouts", s.eval_rollouts},
                    {"oracle_anchor_factor", s.oracle_anchor_factor}};
  const auto& b = cfg.bandit;
  doc["bandit"] = {{"num_arms", b.num_arms}, {"gap", b.gap}, {"num_outcomes", b.num_outcomes},
                   {"sigma", b.sigma}, {"delta", b.delta}};
  doc["peg"] = {{"means", cfg.peg.means}, {"warm_start", cfg.peg.warm_start},
                {"per_round_records", cfg.peg.per_round_records}};
  const auto& a = cfg.params;
  doc["params"] = {{"c", a.c},
                   {"delta", a.delta},
                   {"subsample_ratio", a.subsample_ratio},
                   {"policy_cap", a.policy_cap},
                   {"regret_mode", a.regret_mode},
                   {"regret_x1", a.regret_x1},
                   {"regret_xi1", a.regret_xi1}};
  return doc.dump(2);
}

}  // namespace exo
