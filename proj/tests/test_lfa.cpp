#include <doctest.h>

#include <cmath>

#include "exo/environments.hpp"
#include "exo/errors.hpp"
#include "exo/lfa.hpp"
#include "oracles.hpp"

using namespace exo;

namespace {

StorageSpec small_spec() { return make_storage_benchmark(3, 4, 6).spec; }

}  // namespace

TEST_CASE("anchor grid validation") {
  CHECK_THROWS_AS(AnchorGrid({1.0}), InvalidInput);
  CHECK_THROWS_AS(AnchorGrid({0.0, 1.0, 1.0}), InvalidInput);
  const auto g = AnchorGrid::uniform(10.0, 11);
  CHECK(g[3] == doctest::Approx(3.0));
  CHECK(g.hi() == 10.0);
}

TEST_CASE("hat basis is a nodal partition of unity") {
  const HatBasis basis(AnchorGrid({0.0, 0.5, 2.0, 2.1, 5.0}));
  Rng rng(6);
  for (int i = 0; i < 10000; ++i) {
    const double x = -1.0 + 7.0 * uniform01(rng);
    const auto phi = basis.features(x);
    double sum = 0.0;
    int nonzero = 0;
    for (double p : phi) {
      CHECK(p >= 0.0);
      sum += p;
      nonzero += p != 0.0;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(nonzero <= 2);
  }
  for (std::size_t n = 0; n < basis.dim(); ++n) {
    const auto phi = basis.features(basis.grid()[n]);
    for (std::size_t m = 0; m < basis.dim(); ++m) CHECK(phi[m] == (m == n ? 1.0 : 0.0));
  }
  // Clipped outside the grid.
  CHECK(basis.features(-3.0) == basis.features(0.0));
  CHECK(basis.features(9.0) == basis.features(5.0));
}

TEST_CASE("interpolate equals phi dot w") {
  const HatBasis basis(AnchorGrid::uniform(3.0, 7));
  const std::vector<double> w{1, -2, 0.5, 4, 3, -1, 2};
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const double x = 3.0 * uniform01(rng);
    const auto phi = basis.features(x);
    double dot = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) dot += phi[j] * w[j];
    CHECK(basis.interpolate(x, w) == doctest::Approx(dot).epsilon(1e-13));
  }
}

TEST_CASE("storage dynamics and reward") {
  auto spec = small_spec();
  spec.eta_plus = 0.8;
  spec.eta_minus = 0.5;
  CHECK(storage_post_decision(spec, 5.0, 1.0) == doctest::Approx(5.8));
  CHECK(storage_post_decision(spec, 5.0, -1.0) == doctest::Approx(3.0));
  CHECK(storage_post_decision(spec, 9.9, 2.0) == 10.0);
  CHECK(storage_post_decision(spec, 0.1, -2.0) == 0.0);
  CHECK_THROWS_AS(storage_post_decision(spec, 5.0, 2.5), InvalidInput);

  CHECK(spec.effective_action(5.0, 1.3) == 1.3);
  CHECK(spec.effective_action(5.0, -0.7) == -0.7);
  CHECK(spec.effective_action(9.6, 2.0) == doctest::Approx(0.5));
  CHECK(spec.effective_action(0.2, -2.0) == doctest::Approx(-0.1));

  const int xi = 2;  // price 3
  CHECK(spec.reward(5.0, 1.0, xi) == doctest::Approx(3.0 - 0.1 - 0.05));
  CHECK(spec.reward(10.0, 2.0, xi) == doctest::Approx(-0.1));
  spec.effective_trade = false;
  CHECK(spec.reward(10.0, 2.0, xi) == doctest::Approx(6.0 - 0.2 - 0.1));
  spec.reward_sign = -1.0;
  CHECK(spec.reward(5.0, 1.0, xi) == doctest::Approx(-3.0 - 0.1 - 0.05));

  CHECK(storage_pre_decision(spec, 4.0, 0) == 4.0);
  spec.leakage = 0.9;
  CHECK(storage_pre_decision(spec, 4.0, 0) == doctest::Approx(3.6));
}

TEST_CASE("breakpoint maximization") {
  PiecewiseLinear1D f;
  f.lo = -1;
  f.hi = 1;
  f.breakpoints = {-1, -0.2, 0.3, 1};
  f.eval = [](double a) { return -std::abs(a - 0.3) + 0.5 * std::min(a + 0.2, 0.0); };
  const auto m = breakpoint_maximize(f);
  CHECK(m.argmax == 0.3);
  CHECK(m.value == 0.0);
  f.eval = [](double) { return 1.0; };
  CHECK(breakpoint_maximize(f).argmax == -1);
  f.breakpoints.clear();
  CHECK_THROWS_AS(breakpoint_maximize(f), InvalidInput);
}

TEST_CASE("storage breakpoints are sorted, unique and inside the action box") {
  const auto spec = small_spec();
  const HatBasis basis(AnchorGrid::uniform(spec.capacity, 6));
  for (double x : {0.0, 1.0, 3.3, 8.5, 10.0}) {
    const auto b = storage_action_breakpoints(spec, basis, x);
    CHECK(b.front() == -spec.a_max);
    CHECK(b.back() == spec.a_max);
    for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i] > b[i - 1]);
    CHECK(std::find(b.begin(), b.end(), 0.0) != b.end());
  }
}

TEST_CASE("greedy action is never beaten by a dense grid") {
  Rng rng(19);
  for (int c = 0; c < 40; ++c) {
    auto spec = small_spec();
    spec.eta_plus = 0.5 + uniform01(rng);
    spec.eta_minus = 0.5 + uniform01(rng);
    spec.reward_sign = c % 2 ? 1.0 : -1.0;
    const HatBasis basis(AnchorGrid::uniform(spec.capacity, 6));
    std::vector<double> w(6);
    for (double& v : w) v = 10.0 * uniform01(rng) - 5.0;
    const double x = spec.capacity * uniform01(rng);
    const int xi = static_cast<int>(rng() % 4);
    const auto g = lsvi_greedy_action(spec, basis, w, x, xi);
    oracle::StorageObjective f{spec.capacity, spec.a_max, spec.eta_plus, spec.eta_minus, spec.trans_cost,
                               spec.holding, spec.reward_sign, spec.prices[xi], x, basis.grid().anchors(), w};
    CHECK(g.q >= oracle::dense_grid_max(std::cref(f), spec.a_max, 1e-3) - 1e-12);
    CHECK(g.q == doctest::Approx(f(g.action)).epsilon(1e-12));
  }
}

TEST_CASE("weight table shape") {
  WeightTable w(3, 2, 4);
  CHECK(w.at(2, 1).size() == 4);
  w.at(1, 1)[3] = 2.0;
  CHECK(w.data()[(1 * 2 + 1) * 4 + 3] == 2.0);
}

TEST_CASE("general pass solves the anchored least squares problem") {
  AnchorModel model;
  model.horizon = 2;
  model.num_xi = 2;
  model.anchor_features = {{1.0, 0.0}, {1.0, 1.0}, {1.0, 2.0}};
  model.backup = [](int, int n, int, std::span<const double>) { return double(n * n); };
  const auto w = general_lsvi_backward_pass(model, EmpiricalKernel::from_kernel(ExoKernel::uniform(1, 2)));
  for (int xi = 0; xi < 2; ++xi) {
    CHECK(w.at(0, xi)[0] == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    CHECK(w.at(0, xi)[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(w.at(1, xi)[0] == 0.0);
  }
  model.anchor_features = {{1.0, 2.0}, {2.0, 4.0}, {0.5, 1.0}};
  CHECK_THROWS_AS(general_lsvi_backward_pass(model, EmpiricalKernel::from_kernel(ExoKernel::uniform(1, 2))),
                  ConditioningError);
}

TEST_CASE("hat-basis pass stores the regression targets at the anchors") {
  const auto bench = make_storage_benchmark(2, 3, 5);
  const auto& spec = bench.spec;
  const auto w = lsvi_backward_pass(spec, bench.basis, EmpiricalKernel::from_kernel(spec.price_kernel));
  for (int xi = 0; xi < 3; ++xi) {
    for (std::size_t n = 0; n < 5; ++n) {
      double y = 0.0;
      for (int nxt = 0; nxt < 3; ++nxt) {
        const double x = storage_pre_decision(spec, bench.basis.grid()[n], nxt);
        oracle::StorageObjective f{spec.capacity, spec.a_max, spec.eta_plus, spec.eta_minus, spec.trans_cost,
                                   spec.holding, spec.reward_sign, spec.prices[nxt], x,
                                   bench.basis.grid().anchors(), std::vector<double>(5, 0.0)};
        // Grid-aligned here (C = 10, a_max = 2, anchors at multiples of 2.5).
        y += spec.price_kernel.prob(0, xi, nxt) * oracle::dense_grid_max(std::cref(f), spec.a_max, 1e-3);
      }
      CHECK(w.at(0, xi)[n] == doctest::Approx(y).epsilon(1e-9));
    }
    for (double v : w.at(1, xi)) CHECK(v == 0.0);
  }
}

TEST_CASE("optimistic pass with c = 0 is bit-identical to the plain pass") {
  const auto bench = make_storage_benchmark(4, 4, 6);
  TransitionCounts counts(4, 4);
  Rng rng(4);
  for (int i = 0; i < 10; ++i) counts.add(sample_trace(bench.spec.price_kernel, 4, static_cast<int>(rng() % 4), rng));
  const auto est = estimate_kernel(counts);
  const auto pe = lsvi_backward_pass(bench.spec, bench.basis, est);
  const auto zero = lsvi_backward_pass(bench.spec, bench.basis, est, OptimismConfig{0.0, 0.01, 10, 4});
  CHECK(pe == zero);
  const auto opt = lsvi_backward_pass(bench.spec, bench.basis, est, OptimismConfig{0.5, 0.01, 10, 4});
  for (std::size_t i = 0; i < pe.data().size(); ++i) CHECK(opt.data()[i] >= pe.data()[i] - 1e-9);
}

TEST_CASE("transport of idle actions is the identity; sigma agrees with power iteration") {
  auto bench = make_storage_benchmark(3, 3, 6);
  const std::vector<double> idle(6, 0.0);
  const auto rep = transport_diagnostic(bench.spec, bench.basis, idle, 0);
  CHECK(rep.sigma_max == doctest::Approx(1.0).epsilon(1e-12));
  for (double s : rep.row_sums) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  bench.spec.leakage = 0.7;
  Rng rng(3);
  std::vector<double> actions(6);
  for (double& a : actions) a = bench.spec.a_max * (2 * uniform01(rng) - 1);
  const auto leaky = transport_diagnostic(bench.spec, bench.basis, actions, 1);
  CHECK(leaky.sigma_max == doctest::Approx(oracle::sigma_max_power(leaky.m)).epsilon(1e-8));
  for (double s : leaky.row_sums) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(transport_diagnostic(bench.spec, bench.basis, std::vector<double>(3, 0.0), 0), InvalidInput);
}
