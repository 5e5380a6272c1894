#pragma once

// Linear function approximation on post-decision states: anchor grids, the
// 1-D hat basis, the storage-control model, anchored least-squares value
// iteration and exact 1-D action maximization by breakpoint enumeration.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "exo/core.hpp"
#include "exo/kernels.hpp"

namespace exo {

/// Strictly increasing post-decision anchors rho_1 < ... < rho_N, N >= 2.
class AnchorGrid {
 public:
  explicit AnchorGrid(std::vector<double> anchors);

  /// rho_n = (n-1) C / (N-1).
  static AnchorGrid uniform(double capacity, int n);

  std::size_t size() const noexcept { return anchors_.size(); }
  double operator[](std::size_t n) const { return anchors_[n]; }
  double lo() const noexcept { return anchors_.front(); }
  double hi() const noexcept { return anchors_.back(); }
  const std::vector<double>& anchors() const noexcept { return anchors_; }

 private:
  std::vector<double> anchors_;
};

/// Nodal piecewise-linear basis: phi(rho_n) = e_n, nonnegative, sums to one,
/// at most two nonzero coordinates. Inputs are clipped to [rho_1, rho_N].
class HatBasis {
 public:
  explicit HatBasis(AnchorGrid grid) : grid_(std::move(grid)) {}

  const AnchorGrid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return grid_.size(); }

  /// Left index j and the two weights (phi_j, phi_{j+1}).
  struct Coords {
    std::size_t j;
    double left;
    double right;
  };
  Coords locate(double x) const;

  std::vector<double> features(double x) const;

  /// phi(x)^T w without materializing phi.
  double interpolate(double x, std::span<const double> w) const;

 private:
  AnchorGrid grid_;
};

/// Storage-control environment. The endogenous state is the stored level in
/// [0, C]; the exogenous state indexes a price codebook.
struct StorageSpec {
  int horizon = 6;
  double capacity = 10.0;
  double a_max = 2.0;
  double eta_plus = 1.0;
  double eta_minus = 1.0;
  double leakage = 1.0;     // alpha in g(x^a, xi') = alpha x^a
  double trans_cost = 0.1;  // alpha_c
  double holding = 0.01;    // beta
  /// Sign of the price term: r = sign * price * a - alpha_c |a| - beta x.
  double reward_sign = 1.0;
  /// When true the price and transaction terms use the trade that actually
  /// happens after clipping at 0 or C, so pushing against a full or empty
  /// store earns nothing. When false the nominal action is used.
  bool effective_trade = true;
  std::vector<double> prices;
  ExoKernel price_kernel;  // horizon - 1 stages over prices.size() states
  std::vector<double> init_dist;  // distribution of xi_1; empty means uniform

  int num_prices() const noexcept { return static_cast<int>(prices.size()); }
  void validate() const;

  /// Signed energy exchanged by action a at level x (equals a unless clipped).
  double effective_action(double x, double a) const;
  double reward(double x, double a, int xi) const;
};

/// clip(x + eta+ a+ - a- / eta-, 0, C). Throws InvalidInput if |a| > a_max.
double storage_post_decision(const StorageSpec& spec, double x, double a);

/// alpha * x_post. The price argument is unused by this model.
double storage_pre_decision(const StorageSpec& spec, double x_post, int xi);

/// A continuous piecewise-linear function on [lo, hi] together with a set of
/// points that contains every slope change and both endpoints.
struct PiecewiseLinear1D {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> breakpoints;
  std::function<double(double)> eval;
};

struct Maximizer {
  double argmax = 0.0;
  double value = 0.0;
};

/// Best breakpoint, smallest argument on ties.
Maximizer breakpoint_maximize(const PiecewiseLinear1D& obj);

/// Every a in [-a_max, a_max] at which a -> r(x, a, xi) + phi(f^a(x, a))^T w
/// can change slope: the endpoints, a = 0, the clip kinks at level 0 and C,
/// and each action that lands exactly on an anchor. Sorted, deduplicated.
std::vector<double> storage_action_breakpoints(const StorageSpec& spec, const HatBasis& basis,
                                               double x);
void storage_action_breakpoints_into(const StorageSpec& spec, const HatBasis& basis, double x,
                                     std::vector<double>& out);

struct GreedyAction {
  double action = 0.0;
  double q = 0.0;
};

/// argmax_a r(x, a, xi) + phi(f^a(x, a))^T w, solved exactly.
GreedyAction lsvi_greedy_action(const StorageSpec& spec, const HatBasis& basis,
                                std::span<const double> w, double x, int xi);

/// Post-decision weights w[h][xi] in R^d for h = 0..H-1. The last stage is
/// zero (nothing follows the final action).
class WeightTable {
 public:
  WeightTable() = default;
  WeightTable(int horizon, int num_xi, int dim);

  std::span<const double> at(int h, int xi) const;
  std::span<double> at(int h, int xi);

  int horizon() const noexcept { return horizon_; }
  int num_xi() const noexcept { return num_xi_; }
  int dim() const noexcept { return dim_; }
  const std::vector<double>& data() const noexcept { return w_; }

  friend bool operator==(const WeightTable&, const WeightTable&) = default;

 private:
  int horizon_ = 0;
  int num_xi_ = 0;
  int dim_ = 0;
  std::vector<double> w_;
};

/// Environment description for the generic anchored least-squares pass.
struct AnchorModel {
  int horizon = 1;
  int num_xi = 1;
  /// phi(x^a(n)) for each anchor n; all of the same length d.
  std::vector<std::vector<double>> anchor_features;
  /// max_a' { r(g(x^a(n), xi'), a', xi') + phi(f^a(g(x^a(n), xi'), a'))^T w_next }
  /// at stage h for next exogenous state xi'.
  std::function<double(int h, int n, int xi_next, std::span<const double> w_next)> backup;
};

/// Backward pass: y_h(n; xi) = sum_xi' P_h(xi'|xi) backup(h, n, xi', w_{h+1}(xi')),
/// w_h(xi) = Sigma^{-1} sum_n phi_n y_h(n; xi) with Sigma = Phi Phi^T.
/// With optimism, each row is replaced by optimistic_row against the
/// per-anchor backup vector. Throws ConditioningError when Sigma is singular.
WeightTable general_lsvi_backward_pass(const AnchorModel& model, const EmpiricalKernel& kernel,
                                       const std::optional<OptimismConfig>& optimism = std::nullopt);

/// Storage specialization on a hat basis (Phi = I, so w_h(xi) = y_h(.; xi)).
WeightTable lsvi_backward_pass(const StorageSpec& spec, const HatBasis& basis,
                               const EmpiricalKernel& kernel,
                               const std::optional<OptimismConfig>& optimism = std::nullopt);

struct TransportReport {
  Eigen::MatrixXd m;  // N x N, row n = phi(f^a(g(rho_n, xi'), a_n))
  double sigma_max = 0.0;
  std::vector<double> row_sums;
};

/// One-step interpolation transport of the anchors under fixed actions.
TransportReport transport_diagnostic(const StorageSpec& spec, const HatBasis& basis,
                                     std::span<const double> policy_actions, int xi_next);

/// Greedy actions at each pre-decision anchor image g(rho_n, xi') for stage h,
/// i.e. the policy whose transport is checked by transport_diagnostic.
std::vector<double> greedy_anchor_actions(const StorageSpec& spec, const HatBasis& basis,
                                          const WeightTable& weights, int h, int xi_next);

}  // namespace exo
