#include <doctest.h>

#include "exo/core.hpp"
#include "exo/environments.hpp"
#include "exo/errors.hpp"
#include "exo/rng.hpp"
#include "oracles.hpp"

using namespace exo;

TEST_CASE("kernel rows must be probability vectors") {
  CHECK_NOTHROW(ExoKernel(1, 2, {0.5, 0.5, 1.0, 0.0}));
  CHECK_THROWS_AS(ExoKernel(1, 2, {0.5, 0.4, 1.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(ExoKernel(1, 2, {1.5, -0.5, 1.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(ExoKernel(1, 2, {1.0, 0.0}), InvalidInput);
  const auto u = ExoKernel::uniform(3, 4);
  CHECK(u.stages() == 3);
  CHECK(u.prob(2, 3, 1) == doctest::Approx(0.25));
}

TEST_CASE("homogeneous kernel repeats its matrix") {
  const std::vector<double> m{0.2, 0.8, 0.6, 0.4};
  const auto k = ExoKernel::homogeneous(4, 2, m);
  for (int t = 0; t < 4; ++t) CHECK(k.prob(t, 1, 0) == 0.6);
}

TEST_CASE("mdp validates shapes and states") {
  const TabularDims d{2, 2, 2, 2};
  std::vector<double> r(8, 0.0);
  std::vector<int> f(8, 0);
  CHECK_NOTHROW(TabularExoMdp(d, r, f, ExoKernel::uniform(1, 2)));
  CHECK_THROWS_AS(TabularExoMdp(d, r, f, ExoKernel::uniform(2, 2)), InvalidInput);
  std::vector<int> bad(8, 2);
  CHECK_THROWS_AS(TabularExoMdp(d, r, bad, ExoKernel::uniform(1, 2)), InvalidInput);
  const TabularExoMdp mdp(d, r, f, ExoKernel::uniform(1, 2));
  CHECK_THROWS_AS(mdp.check_state(2, 0), InvalidInput);
  CHECK(mdp.initial_distribution().size() == 2);
}

TEST_CASE("episode trace does not depend on the policy") {
  Rng env(7);
  const auto mdp = make_tabular_benchmark(4, 3, 3, 6, 1.0, env);
  const TabularPolicy zero(mdp.dims(), 0), two(mdp.dims(), 2);
  Rng a(99), b(99), c(99);
  const auto la = simulate_episode(mdp, zero, 1, 2, a);
  const auto lb = simulate_episode(mdp, two, 1, 2, b);
  const auto tc = sample_trace(mdp.true_kernel(), 6, 2, c);
  CHECK(la.trace == lb.trace);
  CHECK(la.trace == tc);
  CHECK(la.trace.xi.size() == 6);
  CHECK(la.trace.xi.front() == 2);
}

TEST_CASE("hindsight value replays the logged episode") {
  Rng env(3);
  const auto mdp = make_tabular_benchmark(5, 4, 3, 5, 0.5, env);
  TabularPolicy pi(mdp.dims());
  Rng pr(11);
  for (int h = 0; h < 5; ++h)
    for (int x = 0; x < 5; ++x)
      for (int xi = 0; xi < 4; ++xi) pi.set(h, x, xi, static_cast<int>(pr() % 3));
  Rng rng(5);
  const auto log = simulate_episode(mdp, pi, 3, 1, rng);
  double total = 0.0;
  for (double r : log.rewards) total += r;
  CHECK(hindsight_value(mdp, pi, 3, log.trace) == doctest::Approx(total).epsilon(1e-14));
  CHECK(oracle::mean_replay_value(mdp, pi, 3, {log.trace}) == doctest::Approx(total).epsilon(1e-14));

  ExoTrace bad = log.trace;
  bad.xi.back() = 4;
  CHECK_THROWS_AS(hindsight_value(mdp, pi, 3, bad), InvalidInput);
}

TEST_CASE("policy rejects out-of-range actions") {
  TabularPolicy pi(TabularDims{2, 2, 2, 3});
  CHECK_THROWS_AS(pi.set(0, 0, 0, 3), InvalidInput);
  pi.set(1, 1, 1, 2);
  CHECK(pi(1, 1, 1) == 2);
}

TEST_CASE("derived seeds are order sensitive and stable") {
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(tag("episode") != tag("env"));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(rng);
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("categorical sampling matches its probabilities") {
  const std::vector<double> p{0.1, 0.0, 0.6, 0.3};
  Rng rng(2024);
  std::vector<int> hits(4, 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++hits[sample_categorical(p, rng)];
  CHECK(hits[1] == 0);
  for (int j = 0; j < 4; ++j) {
    const double se = std::sqrt(p[j] * (1 - p[j]) / n) + 1e-12;
    CHECK(std::abs(hits[j] / double(n) - p[j]) < 5 * se);
  }
}
