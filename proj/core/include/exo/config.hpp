#pragma once

// Experiment configuration. Configs are JSON documents; parsing fills in
// every default so that the materialized config fully describes a run.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace exo {

enum class ExperimentKind { tabular, storage, bandit, peg };

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);

struct TabularParams {
  int num_x = 5;
  int num_xi = 5;
  int num_a = 3;
  int horizon = 5;
  double dirichlet_alpha = 1.0;
  int x1 = 0;
  int memory = 1;

  friend bool operator==(const TabularParams&, const TabularParams&) = default;
};

struct StorageParams {
  int horizon = 6;
  int num_prices = 10;
  int num_anchors = 10;
  double capacity = 10.0;
  double a_max = 2.0;
  double eta_plus = 1.0;
  double eta_minus = 1.0;
  double leakage = 1.0;
  double trans_cost = 0.1;
  double holding = 0.01;
  double reward_sign = 1.0;
  bool effective_trade = true;
  std::vector<double> prices;        // materialized to 1..R
  std::vector<double> start_levels;  // materialized to 5 evenly spaced levels
  int eval_rollouts = 200;
  int oracle_anchor_factor = 4;

  friend bool operator==(const StorageParams&, const StorageParams&) = default;
};

struct BanditParams {
  int num_arms = 5;
  double gap = 0.2;
  int num_outcomes = 20;
  double sigma = 0.5;
  double delta = 0.0;  // materialized to 1/K

  friend bool operator==(const BanditParams&, const BanditParams&) = default;
};

struct PegParams {
  std::vector<double> means{0.75, 0.5};
  int warm_start = 1;
  bool per_round_records = true;

  friend bool operator==(const PegParams&, const PegParams&) = default;
};

struct AlgorithmParams {
  double c = 0.0;  // materialized: 0.3 tabular, 0.5 storage
  double delta = 0.01;
  double subsample_ratio = 0.5;
  std::uint64_t policy_cap = std::uint64_t{1} << 20;
  std::string regret_mode = "summed";  // or "fixed"
  int regret_x1 = 0;
  int regret_xi1 = 0;

  friend bool operator==(const AlgorithmParams&, const AlgorithmParams&) = default;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::tabular;
  std::vector<std::string> algorithms;
  int episodes = 0;
  std::vector<std::uint64_t> seeds;
  TabularParams tabular;
  StorageParams storage;
  BanditParams bandit;
  PegParams peg;
  AlgorithmParams params;
  std::string output_dir = "out";
  int threads = 0;  // 0: hardware concurrency
  bool record_timing = false;
  bool plots = true;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Algorithm name split into its base and an optional "@ratio" suffix
/// (e.g. "pto_lite@0.2").
struct AlgorithmLabel {
  std::string base;
  std::optional<double> ratio;
};
AlgorithmLabel parse_algorithm_label(std::string_view label);

/// Config with all defaults for `kind` materialized.
ExperimentConfig default_config(ExperimentKind kind);

/// Parses JSON text. Missing fields take defaults for the experiment named
/// in the document (or `fallback_kind` when it names none). Unknown keys and
/// invalid values raise ConfigError naming the field.
ExperimentConfig parse_config(std::string_view json_text,
                              std::optional<ExperimentKind> fallback_kind = std::nullopt);
ExperimentConfig load_config(const std::string& path,
                             std::optional<ExperimentKind> fallback_kind = std::nullopt);

/// Fills remaining defaults and checks invariants. Throws ConfigError.
void finalize_config(ExperimentConfig& cfg);

/// Pretty-printed JSON with every field present. parse_config inverts it.
std::string config_to_json(const ExperimentConfig& cfg);

/// Parses "a..b" (inclusive) or a single integer.
std::vector<std::uint64_t> parse_seed_range(std::string_view text);

}  // namespace exo
