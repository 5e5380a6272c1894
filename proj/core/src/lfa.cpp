#include "exo/lfa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exo/errors.hpp"

namespace exo {

AnchorGrid::AnchorGrid(std::vector<double> anchors) : anchors_(std::move(anchors)) {
  if (anchors_.size() < 2) throw InvalidInput("AnchorGrid: need at least two anchors");
  for (std::size_t n = 1; n < anchors_.size(); ++n) {
    if (!(anchors_[n] > anchors_[n - 1])) throw InvalidInput("AnchorGrid: anchors must be strictly increasing");
  }
}

AnchorGrid AnchorGrid::uniform(double capacity, int n) {
  if (n < 2 || !(capacity > 0.0)) throw InvalidInput("AnchorGrid::uniform: need N >= 2 and C > 0");
  std::vector<double> rho(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rho[static_cast<std::size_t>(i)] = i * capacity / (n - 1);
  rho.back() = capacity;
  return AnchorGrid(std::move(rho));
}

HatBasis::Coords HatBasis::locate(double x) const {
  const auto& rho = grid_.anchors();
  x = std::clamp(x, rho.front(), rho.back());
  auto it = std::upper_bound(rho.begin(), rho.end(), x);
  std::size_t j = it == rho.begin() ? 0 : static_cast<std::size_t>(it - rho.begin()) - 1;
  j = std::min(j, rho.size() - 2);
  const double delta = rho[j + 1] - rho[j];
  return {j, (rho[j + 1] - x) / delta, (x - rho[j]) / delta};
}

std::vector<double> HatBasis::features(double x) const {
  std::vector<double> phi(dim(), 0.0);
  const Coords c = locate(x);
  phi[c.j] = c.left;
  phi[c.j + 1] = c.right;
  return phi;
}

double HatBasis::interpolate(double x, std::span<const double> w) const {
  const Coords c = locate(x);
  return c.left * w[c.j] + c.right * w[c.j + 1];
}

void StorageSpec::validate() const {
  if (horizon < 1) throw InvalidInput("StorageSpec: horizon must be >= 1");
  if (!(capacity > 0.0) || !(a_max > 0.0)) throw InvalidInput("StorageSpec: C and a_max must be positive");
  if (!(eta_plus > 0.0) || !(eta_minus > 0.0)) throw InvalidInput("StorageSpec: efficiencies must be positive");
  if (!(leakage > 0.0 && leakage <= 1.0)) throw InvalidInput("StorageSpec: leakage must lie in (0,1]");
  if (trans_cost < 0.0 || holding < 0.0) throw InvalidInput("StorageSpec: costs must be nonnegative");
  if (reward_sign != 1.0 && reward_sign != -1.0) throw InvalidInput("StorageSpec: reward_sign must be +1 or -1");
  if (prices.empty()) throw InvalidInput("StorageSpec: empty price codebook");
  if (price_kernel.num_xi() != num_prices() || price_kernel.stages() != horizon - 1) {
    throw InvalidInput("StorageSpec: price kernel must have horizon-1 stages over the codebook");
  }
  if (!init_dist.empty()) {
    if (init_dist.size() != prices.size()) throw InvalidInput("StorageSpec: init_dist has wrong length");
    check_probability_vector(init_dist, "StorageSpec init_dist");
  }
}

double storage_post_decision(const StorageSpec& spec, double x, double a) {
  if (std::abs(a) > spec.a_max * (1.0 + 1e-12)) {
    throw InvalidInput("storage_post_decision: |a| = " + std::to_string(std::abs(a)) + " exceeds a_max");
  }
  const double charge = std::max(a, 0.0);
  const double discharge = std::max(-a, 0.0);
  return std::clamp(x + spec.eta_plus * charge - discharge / spec.eta_minus, 0.0, spec.capacity);
}

double storage_pre_decision(const StorageSpec& spec, double x_post, int /*xi*/) {
  return spec.leakage * x_post;
}

double StorageSpec::effective_action(double x, double a) const {
  if (a >= 0.0) return std::min(a, std::max(capacity - x, 0.0) / eta_plus);
  return std::max(a, -std::max(x, 0.0) * eta_minus);
}

double StorageSpec::reward(double x, double a, int xi) const {
  const double traded = effective_trade ? effective_action(x, a) : a;
  return reward_sign * prices[static_cast<std::size_t>(xi)] * traded - trans_cost * std::abs(traded) -
         holding * x;
}

Maximizer breakpoint_maximize(const PiecewiseLinear1D& obj) {
  if (obj.breakpoints.empty()) throw InvalidInput("breakpoint_maximize: no breakpoints");
  Maximizer best{obj.breakpoints.front(), obj.eval(obj.breakpoints.front())};
  for (std::size_t i = 1; i < obj.breakpoints.size(); ++i) {
    const double v = obj.eval(obj.breakpoints[i]);
    if (v > best.value || (v == best.value && obj.breakpoints[i] < best.argmax)) {
      best = {obj.breakpoints[i], v};
    }
  }
  return best;
}

void storage_action_breakpoints_into(const StorageSpec& spec, const HatBasis& basis, double x,
                                     std::vector<double>& out) {
  const double lo = -spec.a_max;
  const double hi = spec.a_max;
  out.clear();
  out.push_back(lo);
  out.push_back(0.0);
  out.push_back(hi);
  auto add = [&](double a) {
    if (a > lo && a < hi) out.push_back(a);
  };
  // Clip kinks: f^a reaches 0 when discharging, C when charging.
  add(-spec.eta_minus * x);
  add((spec.capacity - x) / spec.eta_plus);
  for (double rho : basis.grid().anchors()) {
    if (rho >= x) add((rho - x) / spec.eta_plus);
    if (rho <= x) add(-spec.eta_minus * (x - rho));
  }
  std::sort(out.begin(), out.end());
  std::size_t keep = 1;
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] - out[keep - 1] > 1e-12) out[keep++] = out[i];
  }
  out.resize(keep);
}

std::vector<double> storage_action_breakpoints(const StorageSpec& spec, const HatBasis& basis,
                                               double x) {
  std::vector<double> out;
  storage_action_breakpoints_into(spec, basis, x, out);
  return out;
}

GreedyAction lsvi_greedy_action(const StorageSpec& spec, const HatBasis& basis,
                                std::span<const double> w, double x, int xi) {
  thread_local std::vector<double> points;
  storage_action_breakpoints_into(spec, basis, x, points);
  GreedyAction best{};
  bool first = true;
  for (double a : points) {
    const double q = spec.reward(x, a, xi) + basis.interpolate(storage_post_decision(spec, x, a), w);
    if (first || q > best.q) {
      best = {a, q};
      first = false;
    }
  }
  return best;
}

WeightTable::WeightTable(int horizon, int num_xi, int dim)
    : horizon_(horizon),
      num_xi_(num_xi),
      dim_(dim),
      w_(static_cast<std::size_t>(horizon) * num_xi * dim, 0.0) {}

std::span<const double> WeightTable::at(int h, int xi) const {
  return {w_.data() + (static_cast<std::size_t>(h) * num_xi_ + xi) * dim_, static_cast<std::size_t>(dim_)};
}

std::span<double> WeightTable::at(int h, int xi) {
  return {w_.data() + (static_cast<std::size_t>(h) * num_xi_ + xi) * dim_, static_cast<std::size_t>(dim_)};
}

WeightTable general_lsvi_backward_pass(const AnchorModel& model, const EmpiricalKernel& kernel,
                                       const std::optional<OptimismConfig>& optimism) {
  const auto N = model.anchor_features.size();
  if (N == 0) throw InvalidInput("general_lsvi_backward_pass: no anchors");
  const auto d = model.anchor_features.front().size();
  if (d == 0) throw InvalidInput("general_lsvi_backward_pass: empty feature vectors");
  for (const auto& phi : model.anchor_features) {
    if (phi.size() != d) throw InvalidInput("general_lsvi_backward_pass: ragged anchor features");
  }
  if (kernel.rows.num_xi() != model.num_xi || kernel.rows.stages() != model.horizon - 1) {
    throw InvalidInput("general_lsvi_backward_pass: kernel shape does not match the model");
  }
  if (!model.backup) throw InvalidInput("general_lsvi_backward_pass: missing backup oracle");
  if (optimism) optimism->validate();

  Eigen::MatrixXd phi(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(N));
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t i = 0; i < d; ++i) phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) = model.anchor_features[n][i];
  }
  const Eigen::MatrixXd sigma = phi * phi.transpose();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma, Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues().minCoeff();
  const double lambda_max = eig.eigenvalues().maxCoeff();
  if (!(lambda_min > 1e-10 * std::max(1.0, lambda_max))) {
    throw ConditioningError("general_lsvi_backward_pass: anchor design is rank deficient (lambda_min = " +
                                std::to_string(lambda_min) + ")",
                            lambda_min);
  }
  const Eigen::LLT<Eigen::MatrixXd> chol(sigma);

  const int H = model.horizon;
  const int Y = model.num_xi;
  WeightTable w(H, Y, static_cast<int>(d));

  // backups[n * Y + xi'] for the current stage.
  std::vector<double> backups(N * static_cast<std::size_t>(Y));
  std::vector<double> tilted(static_cast<std::size_t>(Y));
  std::vector<int> scratch;
  Eigen::VectorXd y(static_cast<Eigen::Index>(N));

  for (int h = H - 2; h >= 0; --h) {
    for (std::size_t n = 0; n < N; ++n) {
      for (int nxt = 0; nxt < Y; ++nxt) {
        backups[n * Y + static_cast<std::size_t>(nxt)] =
            model.backup(h, static_cast<int>(n), nxt, std::as_const(w).at(h + 1, nxt));
      }
    }
    for (int xi = 0; xi < Y; ++xi) {
      const auto row = kernel.rows.row(h, xi);
      const double bonus = optimism ? bonus_radius(*optimism, kernel.row_count(h, xi)) : 0.0;
      for (std::size_t n = 0; n < N; ++n) {
        const std::span<const double> values(backups.data() + n * Y, static_cast<std::size_t>(Y));
        std::span<const double> weights = row;
        if (optimism) {
          optimistic_row_into(row, values, bonus, tilted, scratch);
          weights = tilted;
        }
        double target = 0.0;
        for (int j = 0; j < Y; ++j) target += weights[static_cast<std::size_t>(j)] * values[static_cast<std::size_t>(j)];
        y(static_cast<Eigen::Index>(n)) = target;
      }
      const Eigen::VectorXd sol = chol.solve(phi * y);
      auto dst = w.at(h, xi);
      for (std::size_t i = 0; i < d; ++i) dst[i] = sol(static_cast<Eigen::Index>(i));
    }
  }
  return w;
}

WeightTable lsvi_backward_pass(const StorageSpec& spec, const HatBasis& basis,
                               const EmpiricalKernel& kernel,
                               const std::optional<OptimismConfig>& optimism) {
  spec.validate();
  AnchorModel model;
  model.horizon = spec.horizon;
  model.num_xi = spec.num_prices();
  for (double rho : basis.grid().anchors()) model.anchor_features.push_back(basis.features(rho));
  model.backup = [&](int, int n, int xi_next, std::span<const double> w_next) {
    const double x = storage_pre_decision(spec, basis.grid()[static_cast<std::size_t>(n)], xi_next);
    return lsvi_greedy_action(spec, basis, w_next, x, xi_next).q;
  };
  return general_lsvi_backward_pass(model, kernel, optimism);
}

TransportReport transport_diagnostic(const StorageSpec& spec, const HatBasis& basis,
                                     std::span<const double> policy_actions, int xi_next) {
  const auto N = basis.dim();
  if (policy_actions.size() != N) throw InvalidInput("transport_diagnostic: need one action per anchor");
  TransportReport report;
  report.m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  report.row_sums.assign(N, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    const double x = storage_pre_decision(spec, basis.grid()[n], xi_next);
    const auto c = basis.locate(storage_post_decision(spec, x, policy_actions[n]));
    const auto r = static_cast<Eigen::Index>(n);
    report.m(r, static_cast<Eigen::Index>(c.j)) += c.left;
    report.m(r, static_cast<Eigen::Index>(c.j + 1)) += c.right;
    report.row_sums[n] = c.left + c.right;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(report.m);
  report.sigma_max = svd.singularValues()(0);
  return report;
}

std::vector<double> greedy_anchor_actions(const StorageSpec& spec, const HatBasis& basis,
                                          const WeightTable& weights, int h, int xi_next) {
  std::vector<double> actions;
  actions.reserve(basis.dim());
  for (double rho : basis.grid().anchors()) {
    const double x = storage_pre_decision(spec, rho, xi_next);
    actions.push_back(lsvi_greedy_action(spec, basis, weights.at(h, xi_next), x, xi_next).action);
  }
  return actions;
}

}  // namespace exo
