#pragma once

// Exo-bandits (full feedback through the exogenous draw) and the
// pure-exploitation greedy construction under partial feedback.

#include <cstdint>
#include <span>
#include <vector>

#include "exo/rng.hpp"

namespace exo {

/// H = 1 Exo-MDP without endogenous state: each round xi ~ exo_dist i.i.d.
/// and every arm's reward r[a][xi] is revealed.
class ExoBandit {
 public:
  ExoBandit(int num_arms, int num_xi, std::vector<double> reward, std::vector<double> exo_dist,
            double sigma = 0.5);

  int num_arms() const noexcept { return num_arms_; }
  int num_xi() const noexcept { return num_xi_; }
  double reward(int a, int xi) const { return reward_[static_cast<std::size_t>(a) * num_xi_ + xi]; }
  std::span<const double> exo_dist() const noexcept { return exo_dist_; }
  /// Sub-Gaussian proxy; used for bound reporting only.
  double sigma() const noexcept { return sigma_; }

  /// Exact mean reward of each arm under exo_dist.
  std::vector<double> means() const;

 private:
  int num_arms_;
  int num_xi_;
  std::vector<double> reward_;
  std::vector<double> exo_dist_;
  double sigma_;
};

/// Bandit with arm 0 at mean 1/2 + gap and the rest at 1/2. The exogenous
/// draw is uniform over num_xi outcomes and every reward is 0 or 1; each
/// suboptimal arm's winning set is a different cyclic shift, so arms are
/// correlated but not identical. num_xi must make 1/2 and 1/2 + gap
/// multiples of 1/num_xi.
ExoBandit make_gap_bandit(int num_arms, double gap, int num_xi = 20);

/// Running reward sums under full feedback. After `rounds` observations
/// every arm has exactly `rounds` samples (k - 1 in 1-based round terms).
struct FullInfoState {
  std::vector<double> sums;
  std::int64_t rounds = 0;

  explicit FullInfoState(int num_arms = 0) : sums(static_cast<std::size_t>(num_arms), 0.0) {}
  void observe(const ExoBandit& bandit, int xi);
};

/// Largest empirical mean, lowest index on ties; arm 0 before any data.
int ftl_select(const FullInfoState& state);

/// Empirical mean plus sqrt(2 sigma^2 ln(A K / delta) / (k - 1)). The bonus is
/// the same for every arm, so this always agrees with ftl_select.
int ucb_select(const FullInfoState& state, double sigma, int num_arms, int horizon, double delta);

enum class BanditAlgo { ftl, ucb };

struct ExoBanditRun {
  std::vector<double> regret;       // per-round simple regret mu* - mu_{a_k}
  std::vector<double> model_error;  // L1 distance of empirical xi frequencies to exo_dist
  std::int64_t disagreements = 0;   // rounds where ucb_select != ftl_select
};

/// delta <= 0 selects the default 1/K.
ExoBanditRun run_exo_bandit(const ExoBandit& bandit, BanditAlgo algo, int rounds, Rng& rng,
                            double delta = 0.0);

/// Bernoulli instance for the pure-exploitation greedy demo.
struct PegInstance {
  std::vector<double> means;
  int warm_start = 1;

  void validate() const;
  int best_arm() const;
  /// mu_max minus the second-largest mean.
  double gap() const;
};

struct PegResult {
  double regret = 0.0;  // pseudo-regret sum_t (mu* - mu_{a_t})
  bool barrier_hit = false;
  /// Pulls of the optimal arm after the warm-start phase.
  std::int64_t optimal_pulls_after_warm_start = 0;
  /// Largest |empirical mean - mean| over arms at the end of the run.
  double estimation_error = 0.0;
  std::vector<double> per_round;  // filled only when requested
};

/// Warm-start pulls each arm L times in index order, then plays the arm with
/// the largest own-pull empirical mean (lowest index on ties).
PegResult run_peg(const PegInstance& instance, int rounds, Rng& rng, bool record_rounds = false);

/// P(optimal arm's warm-start mean is 0 and some other arm's is positive)
/// for an instance with L = warm_start.
double peg_barrier_probability(const PegInstance& instance);

}  // namespace exo
