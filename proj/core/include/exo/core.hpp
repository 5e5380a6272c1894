#pragma once

// Domain types for tabular Exo-MDPs.
//
// Stage indexing: documentation counts stages 1..H, storage is 0-based.
// Stage h (1-based) is stored at index h-1 everywhere. An exogenous kernel
// holds one transition matrix per stage boundary, so a horizon-H problem
// has H-1 kernel stages; kernel stage t maps xi_{t} to xi_{t+1} (0-based).

#include <cstddef>
#include <span>
#include <vector>

#include "exo/rng.hpp"

namespace exo {

/// Stage-indexed row-stochastic matrices P_t(xi' | xi).
class ExoKernel {
 public:
  ExoKernel() = default;

  /// probs is laid out [stage][xi][xi']. Rows must be probability vectors
  /// (entries in [0,1], sum within 1e-12 of one).
  ExoKernel(int stages, int num_xi, std::vector<double> probs);

  static ExoKernel uniform(int stages, int num_xi);

  /// Repeats one num_xi x num_xi matrix at every stage.
  static ExoKernel homogeneous(int stages, int num_xi, std::span<const double> matrix);

  int stages() const noexcept { return stages_; }
  int num_xi() const noexcept { return num_xi_; }

  std::span<const double> row(int stage, int xi) const;
  double prob(int stage, int xi, int next) const { return row(stage, xi)[next]; }
  const std::vector<double>& data() const noexcept { return probs_; }

  friend bool operator==(const ExoKernel&, const ExoKernel&) = default;

 private:
  int stages_ = 0;
  int num_xi_ = 0;
  std::vector<double> probs_;
};

/// Validates a single probability vector (tolerance 1e-12 on the sum).
void check_probability_vector(std::span<const double> p, const char* what);

struct TabularDims {
  int horizon = 1;
  int num_x = 1;
  int num_xi = 1;
  int num_a = 1;

  friend bool operator==(const TabularDims&, const TabularDims&) = default;
};

/// Finite Exo-MDP: reward r[x][a][xi], deterministic endogenous map
/// f[x][a][xi'] and the true exogenous kernel. Immutable once built.
class TabularExoMdp {
 public:
  /// init_dist is the distribution of xi_1; empty means uniform.
  TabularExoMdp(TabularDims dims, std::vector<double> reward, std::vector<int> endo_map,
                ExoKernel true_kernel, std::vector<double> init_dist = {});

  const TabularDims& dims() const noexcept { return dims_; }
  int horizon() const noexcept { return dims_.horizon; }
  int num_x() const noexcept { return dims_.num_x; }
  int num_xi() const noexcept { return dims_.num_xi; }
  int num_a() const noexcept { return dims_.num_a; }

  double reward(int x, int a, int xi) const { return reward_[index(x, a, xi)]; }
  int next_x(int x, int a, int xi_next) const { return endo_map_[index(x, a, xi_next)]; }

  const ExoKernel& true_kernel() const noexcept { return kernel_; }
  std::span<const double> initial_distribution() const noexcept { return init_dist_; }

  const std::vector<double>& rewards() const noexcept { return reward_; }
  const std::vector<int>& endo_map() const noexcept { return endo_map_; }

  void check_state(int x, int xi) const;

 private:
  std::size_t index(int x, int a, int xi) const noexcept {
    return (static_cast<std::size_t>(x) * dims_.num_a + a) * dims_.num_xi + xi;
  }

  TabularDims dims_;
  std::vector<double> reward_;
  std::vector<int> endo_map_;
  ExoKernel kernel_;
  std::vector<double> init_dist_;
};

/// One episode's realized exogenous states xi_1..xi_H.
struct ExoTrace {
  std::vector<int> xi;

  friend bool operator==(const ExoTrace&, const ExoTrace&) = default;
};

/// Deterministic Markov policy pi[h][x][xi] -> a.
class TabularPolicy {
 public:
  TabularPolicy() = default;
  explicit TabularPolicy(const TabularDims& dims, int fill = 0);
  TabularPolicy(const TabularDims& dims, std::vector<int> actions);

  int operator()(int h, int x, int xi) const { return actions_[index(h, x, xi)]; }
  void set(int h, int x, int xi, int a);

  const TabularDims& dims() const noexcept { return dims_; }
  const std::vector<int>& actions() const noexcept { return actions_; }

  friend bool operator==(const TabularPolicy&, const TabularPolicy&) = default;

 private:
  std::size_t index(int h, int x, int xi) const noexcept {
    return (static_cast<std::size_t>(h) * dims_.num_x + x) * dims_.num_xi + xi;
  }

  TabularDims dims_;
  std::vector<int> actions_;
};

/// V[h][x][xi] for h = 0..H; slice H is the terminal zero.
class ValueTable {
 public:
  ValueTable() = default;
  explicit ValueTable(const TabularDims& dims);

  double operator()(int h, int x, int xi) const { return v_[index(h, x, xi)]; }
  double& at(int h, int x, int xi) { return v_[index(h, x, xi)]; }

  /// Slice for stage h as a flat [x][xi] view.
  std::span<const double> stage(int h) const;

  const TabularDims& dims() const noexcept { return dims_; }

 private:
  std::size_t index(int h, int x, int xi) const noexcept {
    return (static_cast<std::size_t>(h) * dims_.num_x + x) * dims_.num_xi + xi;
  }

  TabularDims dims_;
  std::vector<double> v_;
};

struct EpisodeLog {
  ExoTrace trace;
  std::vector<int> endo;
  std::vector<int> actions;
  std::vector<double> rewards;
};

/// Draws xi_2..xi_H from the kernel rows starting at xi1.
ExoTrace sample_trace(const ExoKernel& kernel, int horizon, int xi1, Rng& rng);

/// Rolls one episode. The exogenous trace is drawn exactly as sample_trace
/// would draw it from the same stream, so it does not depend on the policy.
EpisodeLog simulate_episode(const TabularExoMdp& mdp, const TabularPolicy& policy, int x1, int xi1,
                            Rng& rng);

/// Return of `policy` replayed along a fixed trace from x1.
double hindsight_value(const TabularExoMdp& mdp, const TabularPolicy& policy, int x1,
                       const ExoTrace& trace);

}  // namespace exo
