#include <doctest.h>

#include <cmath>

#include "exo/environments.hpp"
#include "exo/errors.hpp"
#include "exo/evaluation.hpp"
#include "exo/kernels.hpp"
#include "exo/tabular_planner.hpp"
#include "oracles.hpp"

using namespace exo;

TEST_CASE("exact evaluation equals path enumeration") {
  Rng rng(44);
  const auto mdp = make_tabular_benchmark(3, 3, 2, 4, 1.0, rng);
  std::vector<int> acts(4 * 3 * 3);
  for (int& a : acts) a = static_cast<int>(rng() % 2);
  const TabularPolicy pi(mdp.dims(), acts);
  const auto v = exact_evaluate(mdp, pi);
  for (int x = 0; x < 3; ++x)
    for (int xi = 0; xi < 3; ++xi) CHECK(v(0, x, xi) == doctest::Approx(oracle::path_value(mdp, acts, x, xi)).epsilon(1e-12));
}

TEST_CASE("exact evaluation of the planned policy reproduces the planner's values") {
  Rng rng(45);
  const auto mdp = make_tabular_benchmark(5, 5, 3, 5, 1.0, rng);
  const auto plan = pto_plan(mdp, mdp.true_kernel());
  const auto v = exact_evaluate(mdp, plan.policy);
  for (int h = 0; h <= 5; ++h)
    for (int x = 0; x < 5; ++x)
      for (int xi = 0; xi < 5; ++xi) CHECK(v(h, x, xi) == doctest::Approx(plan.v(h, x, xi)).epsilon(1e-12));
}

TEST_CASE("monte carlo agrees with exact evaluation") {
  Rng rng(46);
  const auto mdp = make_tabular_benchmark(4, 3, 3, 5, 1.0, rng);
  const TabularPolicy pi(mdp.dims(), 1);
  const auto v = exact_evaluate(mdp, pi);
  double sum = 0.0, sq = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const auto log = simulate_episode(mdp, pi, 2, 1, rng);
    double g = 0;
    for (double r : log.rewards) g += r;
    sum += g;
    sq += g * g;
  }
  const double mean = sum / n, se = std::sqrt((sq / n - mean * mean) / n);
  CHECK(std::abs(mean - v(0, 2, 1)) < 4 * se);
}

TEST_CASE("regret is nonnegative and zero for the optimal policy") {
  Rng rng(47);
  for (int i = 0; i < 20; ++i) {
    const auto mdp = make_tabular_benchmark(4, 4, 3, 4, 1.0, rng);
    const auto v_star = pto_plan(mdp, mdp.true_kernel()).v;
    CHECK(instantaneous_regret(mdp, v_star, pto_plan(mdp, mdp.true_kernel()).policy, RegretMode::summed()) ==
          doctest::Approx(0.0));
    TransitionCounts c(4, 4);
    for (int k = 0; k < i; ++k) c.add(sample_trace(mdp.true_kernel(), 4, static_cast<int>(rng() % 4), rng));
    const auto pi = pto_plan(mdp, estimate_kernel(c)).policy;
    CHECK(instantaneous_regret(mdp, v_star, pi, RegretMode::summed()) >= -1e-9);
    CHECK(instantaneous_regret(mdp, v_star, pi, RegretMode::fixed(1, 2)) >= -1e-9);
  }
}

TEST_CASE("summed regret is the sum of fixed regrets") {
  Rng rng(48);
  const auto mdp = make_tabular_benchmark(3, 2, 3, 3, 1.0, rng);
  const TabularPolicy pi(mdp.dims(), 2);
  double total = 0.0;
  for (int x = 0; x < 3; ++x)
    for (int xi = 0; xi < 2; ++xi) total += instantaneous_regret(mdp, pi, RegretMode::fixed(x, xi));
  CHECK(instantaneous_regret(mdp, pi, RegretMode::summed()) == doctest::Approx(total).epsilon(1e-12));
  CHECK_THROWS_AS(instantaneous_regret(mdp, pi, RegretMode::fixed(3, 0)), InvalidInput);
}

TEST_CASE("frobenius model error") {
  const auto u = ExoKernel::uniform(2, 2);
  const auto k = ExoKernel(2, 2, {1, 0, 0, 1, 0.5, 0.5, 0.5, 0.5});
  CHECK(model_error_frobenius(u, u) == 0.0);
  CHECK(model_error_frobenius(k, u) == doctest::Approx(0.5 * 1.0));
  CHECK(model_error_frobenius(ExoKernel(0, 3, {}), ExoKernel(0, 3, {})) == 0.0);
  CHECK_THROWS_AS(model_error_frobenius(ExoKernel::uniform(1, 2), u), InvalidInput);
}

TEST_CASE("storage oracle has zero regret against itself; zero-cost zero-price returns vanish") {
  const auto bench = make_storage_benchmark(4, 3, 5);
  const auto levels = default_start_levels(bench.spec);
  CHECK(levels == std::vector<double>{0.0, 2.5, 5.0, 7.5, 10.0});
  Rng rng(5);
  const StorageRegretEvaluator ev(bench.spec, levels, 50, 20, rng);
  const auto self = ev.regret(ev.oracle_basis(), ev.oracle_weights());
  CHECK(self.mean == 0.0);
  CHECK(self.se == 0.0);
  CHECK(ev.rollouts().traces.size() == 50);

  StorageOverrides o;
  o.prices = std::vector<double>{0, 0, 0};
  o.trans_cost = 0.0;
  o.holding = 0.0;
  const auto zero = make_storage_benchmark(4, 3, 5, o);
  const auto w = lsvi_backward_pass(zero.spec, zero.basis, EmpiricalKernel::from_kernel(zero.spec.price_kernel));
  Rng r2(6);
  CHECK(evaluate_storage_policy(zero.spec, zero.basis, w, levels, 20, r2) == 0.0);
}

TEST_CASE("storage regret estimates agree across rollout seeds") {
  const auto bench = make_storage_benchmark(4, 4, 4);
  const auto w = lsvi_backward_pass(bench.spec, bench.basis, EmpiricalKernel::from_kernel(ExoKernel::uniform(3, 4)));
  const auto levels = default_start_levels(bench.spec);
  Rng a(1), b(2);
  const StorageRegretEvaluator e1(bench.spec, levels, 10000, 16, a);
  const StorageRegretEvaluator e2(bench.spec, levels, 10000, 16, b);
  const auto r1 = e1.regret(bench.basis, w), r2 = e2.regret(bench.basis, w);
  CHECK(std::abs(r1.mean - r2.mean) <= 3 * std::sqrt(r1.se * r1.se + r2.se * r2.se));
}

TEST_CASE("mean and standard error") {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto m = mean_and_se(xs);
  CHECK(m.mean == 2.5);
  CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}
