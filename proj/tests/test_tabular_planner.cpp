#include <doctest.h>

#include "exo/environments.hpp"
#include "exo/errors.hpp"
#include "exo/evaluation.hpp"
#include "exo/kernels.hpp"
#include "exo/tabular_planner.hpp"
#include "oracles.hpp"

using namespace exo;

TEST_CASE("planner value equals exhaustive enumeration on small instances") {
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const auto mdp = make_tabular_benchmark(2, 2, 2, 3, 0.7, rng);
    const auto plan = pto_plan(mdp, mdp.true_kernel());
    const auto best = oracle::best_values_by_enumeration(mdp);
    for (int x = 0; x < 2; ++x)
      for (int xi = 0; xi < 2; ++xi) CHECK(plan.v(0, x, xi) == doctest::Approx(best[x * 2 + xi]).epsilon(1e-12));
  }
}

TEST_CASE("planner greedy step is consistent with its q table") {
  Rng rng(9);
  const auto mdp = make_tabular_benchmark(4, 3, 3, 4, 1.0, rng);
  const auto plan = pto_plan(mdp, mdp.true_kernel());
  for (int h = 0; h < 4; ++h)
    for (int x = 0; x < 4; ++x)
      for (int xi = 0; xi < 3; ++xi) {
        const int a = plan.policy(h, x, xi);
        for (int b = 0; b < 3; ++b) {
          CHECK(plan.q_at(h, x, xi, a) >= plan.q_at(h, x, xi, b));
          if (b < a) CHECK(plan.q_at(h, x, xi, b) < plan.q_at(h, x, xi, a));
        }
        CHECK(plan.v(h, x, xi) == plan.q_at(h, x, xi, a));
      }
  // Terminal slice is zero.
  for (double v : plan.v.stage(4)) CHECK(v == 0.0);
}

TEST_CASE("horizon one plans myopically") {
  Rng rng(5);
  const auto mdp = make_tabular_benchmark(3, 2, 4, 1, 1.0, rng);
  const auto plan = pto_plan(mdp, mdp.true_kernel());
  for (int x = 0; x < 3; ++x)
    for (int xi = 0; xi < 2; ++xi) {
      double best = -1;
      for (int a = 0; a < 4; ++a) best = std::max(best, mdp.reward(x, a, xi));
      CHECK(plan.v(0, x, xi) == best);
    }
}

TEST_CASE("optimistic planner: c = 0 matches plain planning; c > 0 inflates values") {
  Rng rng(12);
  const auto mdp = make_tabular_benchmark(5, 5, 3, 5, 1.0, rng);
  TransitionCounts counts(5, 5);
  for (int i = 0; i < 30; ++i) counts.add(sample_trace(mdp.true_kernel(), 5, static_cast<int>(rng() % 5), rng));
  const auto est = estimate_kernel(counts);
  const auto plain = pto_plan(mdp, est);
  const auto zero = pto_opt_plan(mdp, est, {0.0, 0.01, 100, 5});
  CHECK(zero.policy == plain.policy);
  CHECK(zero.q == plain.q);
  const auto opt = pto_opt_plan(mdp, est, {0.3, 0.01, 100, 5});
  for (int x = 0; x < 5; ++x)
    for (int xi = 0; xi < 5; ++xi) CHECK(opt.v(0, x, xi) >= plain.v(0, x, xi) - 1e-12);
}

TEST_CASE("policy space size and cap") {
  CHECK(policy_space_size({2, 2, 2, 2}) == 256.0);
  Rng rng(1);
  const auto mdp = make_tabular_benchmark(5, 5, 3, 5, 1.0, rng);
  CHECK_THROWS_AS(ftl_erm_plan(mdp, {}, 0), CapacityError);
  try {
    ftl_erm_plan(mdp, {}, 0, 100);
  } catch (const CapacityError& e) {
    CHECK(e.required_cap() > 1e50);
  }
}

TEST_CASE("ftl-erm maximizes the empirical hindsight value") {
  Rng rng(21);
  const auto mdp = make_tabular_benchmark(2, 2, 2, 2, 1.0, rng);
  std::vector<ExoTrace> traces;
  for (int i = 0; i < 15; ++i) traces.push_back(sample_trace(mdp.true_kernel(), 2, static_cast<int>(rng() % 2), rng));
  const auto pi = ftl_erm_plan(mdp, traces, 1);
  const double got = oracle::mean_replay_value(mdp, pi, 1, traces);
  double best = -1e300;
  oracle::for_each_policy(mdp.dims(), [&](const std::vector<int>& a) {
    best = std::max(best, oracle::mean_replay_value(mdp, TabularPolicy(mdp.dims(), a), 1, traces));
  });
  CHECK(got == doctest::Approx(best).epsilon(1e-12));
  // No data: every policy ties, the first one wins.
  CHECK(ftl_erm_plan(mdp, {}, 1) == TabularPolicy(mdp.dims(), 0));
}

TEST_CASE("ftl-erm on many traces is near-optimal from its start state") {
  Rng rng(77);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto mdp = make_tabular_benchmark(2, 2, 2, 2, 1.0, rng);
    std::vector<ExoTrace> traces;
    for (int j = 0; j < 10000; ++j) traces.push_back(sample_trace(mdp.true_kernel(), 2, static_cast<int>(rng() % 2), rng));
    const auto pi = ftl_erm_plan(mdp, traces, 0);
    const auto v_pi = exact_evaluate(mdp, pi);
    const auto v_star = pto_plan(mdp, mdp.true_kernel()).v;
    const double gap = 0.5 * ((v_star(0, 0, 0) - v_pi(0, 0, 0)) + (v_star(0, 0, 1) - v_pi(0, 0, 1)));
    worst = std::max(worst, gap);
  }
  CHECK(worst <= 0.03);
}
