#pragma once

// Episode loops for each experiment family and the worker pool that fans
// them out over (algorithm, seed) pairs.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "exo/config.hpp"
#include "exo/core.hpp"

namespace exo {

struct RunRecord {
  std::string experiment;
  std::string algorithm;
  std::uint64_t seed = 0;
  int episode = 0;  // 1-based
  double instant_regret = 0.0;
  double cumulative_regret = 0.0;
  double model_error = 0.0;
  double wall_time_ms = 0.0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Sorts by (algorithm, seed, episode).
void sort_records(std::vector<RunRecord>& records);

/// Test hooks for a single learner run.
struct LearnerOptions {
  /// Plan against this kernel instead of the estimate (model error is still
  /// measured against it).
  std::optional<ExoKernel> kernel_override;
};

/// One (algorithm, seed) run of the tabular loop: estimate, plan, record,
/// then simulate and update counts.
std::vector<RunRecord> run_tabular_learner(const ExperimentConfig& cfg, const std::string& algorithm,
                                           std::uint64_t seed, const LearnerOptions& options = {});
std::vector<RunRecord> run_storage_learner(const ExperimentConfig& cfg, const std::string& algorithm,
                                           std::uint64_t seed, const LearnerOptions& options = {});
std::vector<RunRecord> run_bandit_learner(const ExperimentConfig& cfg, const std::string& algorithm,
                                          std::uint64_t seed);

std::vector<RunRecord> run_tabular_experiment(const ExperimentConfig& cfg);
std::vector<RunRecord> run_storage_experiment(const ExperimentConfig& cfg);
std::vector<RunRecord> run_bandit_experiment(const ExperimentConfig& cfg);

struct PegSummary {
  int runs = 0;
  int rounds = 0;
  double mean_regret = 0.0;
  double se_regret = 0.0;
  double barrier_frequency = 0.0;
  double barrier_probability = 0.0;  // exact, from the warm-start law
  double regret_lower_bound = 0.0;   // barrier_probability * gap * (T - A L)
  double mean_estimation_error = 0.0;
};

struct PegExperimentResult {
  std::vector<RunRecord> records;
  PegSummary summary;
};

/// One run per seed. With peg.per_round_records every round is a record;
/// otherwise only the last round is kept. model_error is the run's final
/// max-arm estimation error on every row.
PegExperimentResult run_peg_experiment(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment (PEG summary dropped).
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

/// Runs job(0..count-1) on `threads` workers (0: hardware concurrency).
/// The first exception thrown by any job is rethrown after all workers stop.
void parallel_for(int count, int threads, const std::function<void(int)>& job);

}  // namespace exo
