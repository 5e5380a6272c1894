#pragma once

// Exact tabular policy evaluation, regret and model-error metrics, and
// Monte-Carlo evaluation of greedy storage policies.

#include <span>
#include <vector>

#include "exo/core.hpp"
#include "exo/kernels.hpp"
#include "exo/lfa.hpp"
#include "exo/rng.hpp"

namespace exo {

/// V^pi on the true kernel by backward induction.
ValueTable exact_evaluate(const TabularExoMdp& mdp, const TabularPolicy& policy);

struct RegretMode {
  enum class Kind { summed, fixed };
  Kind kind = Kind::summed;
  int x1 = 0;
  int xi1 = 0;

  /// sum over every (x, xi) of V*_1(x, xi) - V^pi_1(x, xi).
  static RegretMode summed() { return {}; }
  /// V*_1(s_1) - V^pi_1(s_1) at a single initial state.
  static RegretMode fixed(int x1, int xi1) { return {Kind::fixed, x1, xi1}; }
};

/// Stage-1 gap against a precomputed optimal value table.
double instantaneous_regret(const TabularExoMdp& mdp, const ValueTable& v_star,
                            const TabularPolicy& policy, RegretMode mode);

/// Convenience overload that plans V* on the true kernel first.
double instantaneous_regret(const TabularExoMdp& mdp, const TabularPolicy& policy, RegretMode mode);

/// Mean over kernel stages of ||P_hat_t - P_t||_F. Zero when there are no stages.
double model_error_frobenius(const ExoKernel& estimate, const ExoKernel& truth);
double model_error_frobenius(const EmpiricalKernel& estimate, const ExoKernel& truth);

/// Paired start levels and price traces, reused across policies so that
/// policy comparisons see common random numbers.
struct StorageRollouts {
  std::vector<double> x1;
  std::vector<ExoTrace> traces;
};

/// Rollout i starts at start_levels[i % size] with xi_1 drawn from the
/// spec's initial distribution.
StorageRollouts draw_storage_rollouts(const StorageSpec& spec, std::span<const double> start_levels,
                                      int num_rollouts, Rng& rng);

/// Total reward of the greedy policy induced by `weights` along one trace.
double storage_policy_return(const StorageSpec& spec, const HatBasis& basis,
                             const WeightTable& weights, double x1, const ExoTrace& trace);

/// Monte-Carlo mean return of the greedy policy over num_rollouts draws.
double evaluate_storage_policy(const StorageSpec& spec, const HatBasis& basis,
                               const WeightTable& weights, std::span<const double> start_levels,
                               int num_rollouts, Rng& rng);

/// `count` evenly spaced levels on [0, C] (count >= 1; a single level is 0).
std::vector<double> default_start_levels(const StorageSpec& spec, int count = 5);

struct MeanWithError {
  double mean = 0.0;
  double se = 0.0;
};

MeanWithError mean_and_se(std::span<const double> xs);

/// Storage regret against a comparator policy obtained from an anchored pass
/// on the true price kernel, estimated on a fixed set of paired rollouts.
class StorageRegretEvaluator {
 public:
  /// Comparator on a uniform grid of oracle_anchors anchors.
  StorageRegretEvaluator(const StorageSpec& spec, std::span<const double> start_levels,
                         int num_rollouts, int oracle_anchors, Rng& rng);
  /// Comparator on an explicit basis.
  StorageRegretEvaluator(const StorageSpec& spec, HatBasis oracle_basis,
                         std::span<const double> start_levels, int num_rollouts, Rng& rng);

  /// Mean and standard error of (oracle return - policy return) per rollout.
  MeanWithError regret(const HatBasis& basis, const WeightTable& weights) const;

  const StorageRollouts& rollouts() const noexcept { return rollouts_; }
  const HatBasis& oracle_basis() const noexcept { return oracle_basis_; }
  const WeightTable& oracle_weights() const noexcept { return oracle_weights_; }
  const std::vector<double>& oracle_returns() const noexcept { return oracle_returns_; }

 private:
  StorageSpec spec_;
  HatBasis oracle_basis_;
  WeightTable oracle_weights_;
  StorageRollouts rollouts_;
  std::vector<double> oracle_returns_;
};

}  // namespace exo
