#include "exo/evaluation.hpp"

#include <cmath>

#include "exo/errors.hpp"
#include "exo/tabular_planner.hpp"

namespace exo {

ValueTable exact_evaluate(const TabularExoMdp& mdp, const TabularPolicy& policy) {
  const TabularDims& d = mdp.dims();
  if (!(policy.dims() == d)) throw InvalidInput("exact_evaluate: policy shape mismatch");
  const ExoKernel& P = mdp.true_kernel();
  ValueTable v(d);
  for (int h = d.horizon - 1; h >= 0; --h) {
    const bool last = h == d.horizon - 1;
    for (int x = 0; x < d.num_x; ++x) {
      for (int xi = 0; xi < d.num_xi; ++xi) {
        const int a = policy(h, x, xi);
        double cont = 0.0;
        if (!last) {
          const auto row = P.row(h, xi);
          for (int nxt = 0; nxt < d.num_xi; ++nxt) {
            cont += row[static_cast<std::size_t>(nxt)] * v(h + 1, mdp.next_x(x, a, nxt), nxt);
          }
        }
        v.at(h, x, xi) = mdp.reward(x, a, xi) + cont;
      }
    }
  }
  return v;
}

double instantaneous_regret(const TabularExoMdp& mdp, const ValueTable& v_star,
                            const TabularPolicy& policy, RegretMode mode) {
  const ValueTable v = exact_evaluate(mdp, policy);
  if (mode.kind == RegretMode::Kind::fixed) {
    mdp.check_state(mode.x1, mode.xi1);
    return v_star(0, mode.x1, mode.xi1) - v(0, mode.x1, mode.xi1);
  }
  double total = 0.0;
  for (int x = 0; x < mdp.num_x(); ++x) {
    for (int xi = 0; xi < mdp.num_xi(); ++xi) total += v_star(0, x, xi) - v(0, x, xi);
  }
  return total;
}

double instantaneous_regret(const TabularExoMdp& mdp, const TabularPolicy& policy, RegretMode mode) {
  return instantaneous_regret(mdp, pto_plan(mdp, mdp.true_kernel()).v, policy, mode);
}

double model_error_frobenius(const ExoKernel& estimate, const ExoKernel& truth) {
  if (estimate.stages() != truth.stages() || estimate.num_xi() != truth.num_xi()) {
    throw InvalidInput("model_error_frobenius: kernel shapes differ");
  }
  if (truth.stages() == 0) return 0.0;
  const auto per_stage = static_cast<std::size_t>(truth.num_xi()) * truth.num_xi();
  double sum = 0.0;
  for (int t = 0; t < truth.stages(); ++t) {
    double sq = 0.0;
    for (std::size_t i = 0; i < per_stage; ++i) {
      const double diff = estimate.data()[t * per_stage + i] - truth.data()[t * per_stage + i];
      sq += diff * diff;
    }
    sum += std::sqrt(sq);
  }
  return sum / truth.stages();
}

double model_error_frobenius(const EmpiricalKernel& estimate, const ExoKernel& truth) {
  return model_error_frobenius(estimate.rows, truth);
}

StorageRollouts draw_storage_rollouts(const StorageSpec& spec, std::span<const double> start_levels,
                                      int num_rollouts, Rng& rng) {
  if (num_rollouts < 1) throw InvalidInput("storage rollouts: num_rollouts must be >= 1");
  if (start_levels.empty()) throw InvalidInput("storage rollouts: empty start grid");
  const std::vector<double> uniform(spec.prices.size(), 1.0 / static_cast<double>(spec.prices.size()));
  const std::span<const double> init = spec.init_dist.empty() ? std::span<const double>(uniform)
                                                              : std::span<const double>(spec.init_dist);
  StorageRollouts out;
  out.x1.reserve(static_cast<std::size_t>(num_rollouts));
  out.traces.reserve(static_cast<std::size_t>(num_rollouts));
  for (int i = 0; i < num_rollouts; ++i) {
    const double x = start_levels[static_cast<std::size_t>(i) % start_levels.size()];
    if (x < 0.0 || x > spec.capacity) throw InvalidInput("storage rollouts: start level outside [0, C]");
    out.x1.push_back(x);
    const auto xi1 = static_cast<int>(sample_categorical(init, rng));
    out.traces.push_back(sample_trace(spec.price_kernel, spec.horizon, xi1, rng));
  }
  return out;
}

double storage_policy_return(const StorageSpec& spec, const HatBasis& basis,
                             const WeightTable& weights, double x1, const ExoTrace& trace) {
  double total = 0.0;
  double x = x1;
  for (int h = 0; h < spec.horizon; ++h) {
    const int xi = trace.xi[static_cast<std::size_t>(h)];
    const auto greedy = lsvi_greedy_action(spec, basis, weights.at(h, xi), x, xi);
    total += spec.reward(x, greedy.action, xi);
    if (h + 1 < spec.horizon) {
      x = storage_pre_decision(spec, storage_post_decision(spec, x, greedy.action),
                               trace.xi[static_cast<std::size_t>(h) + 1]);
    }
  }
  return total;
}

double evaluate_storage_policy(const StorageSpec& spec, const HatBasis& basis,
                               const WeightTable& weights, std::span<const double> start_levels,
                               int num_rollouts, Rng& rng) {
  const StorageRollouts r = draw_storage_rollouts(spec, start_levels, num_rollouts, rng);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.traces.size(); ++i) {
    sum += storage_policy_return(spec, basis, weights, r.x1[i], r.traces[i]);
  }
  return sum / static_cast<double>(r.traces.size());
}

std::vector<double> default_start_levels(const StorageSpec& spec, int count) {
  if (count < 1) throw InvalidInput("default_start_levels: count must be >= 1");
  if (count == 1) return {0.0};
  std::vector<double> levels(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) levels[static_cast<std::size_t>(i)] = i * spec.capacity / (count - 1);
  return levels;
}

MeanWithError mean_and_se(std::span<const double> xs) {
  MeanWithError out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) out.mean += x;
  out.mean /= n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

StorageRegretEvaluator::StorageRegretEvaluator(const StorageSpec& spec,
                                               std::span<const double> start_levels,
                                               int num_rollouts, int oracle_anchors, Rng& rng)
    : StorageRegretEvaluator(spec, HatBasis(AnchorGrid::uniform(spec.capacity, oracle_anchors)),
                             start_levels, num_rollouts, rng) {}

StorageRegretEvaluator::StorageRegretEvaluator(const StorageSpec& spec, HatBasis oracle_basis,
                                               std::span<const double> start_levels,
                                               int num_rollouts, Rng& rng)
    : spec_(spec), oracle_basis_(std::move(oracle_basis)) {
  spec_.validate();
  oracle_weights_ = lsvi_backward_pass(spec_, oracle_basis_, EmpiricalKernel::from_kernel(spec_.price_kernel));
  rollouts_ = draw_storage_rollouts(spec_, start_levels, num_rollouts, rng);
  oracle_returns_.reserve(rollouts_.traces.size());
  for (std::size_t i = 0; i < rollouts_.traces.size(); ++i) {
    oracle_returns_.push_back(
        storage_policy_return(spec_, oracle_basis_, oracle_weights_, rollouts_.x1[i], rollouts_.traces[i]));
  }
}

MeanWithError StorageRegretEvaluator::regret(const HatBasis& basis, const WeightTable& weights) const {
  std::vector<double> gaps(rollouts_.traces.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    gaps[i] = oracle_returns_[i] -
              storage_policy_return(spec_, basis, weights, rollouts_.x1[i], rollouts_.traces[i]);
  }
  return mean_and_se(gaps);
}

}  // namespace exo
