#include <doctest.h>

#include <cmath>

#include "exo/environments.hpp"
#include "exo/errors.hpp"
#include "exo/kernels.hpp"
#include "oracles.hpp"

using namespace exo;

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("markov counts increment H-1 cells per trace") {
  TransitionCounts c(4, 3, 1);
  c.add(ExoTrace{{0, 1, 1, 2}});
  CHECK(c.at(0, 0, 1) == 1);
  CHECK(c.at(1, 1, 1) == 1);
  CHECK(c.at(2, 1, 2) == 1);
  std::uint64_t total = 0;
  for (int t = 0; t < c.stages(); ++t) total += c.total(t);
  CHECK(total == 3);
  CHECK_THROWS_AS(c.add(ExoTrace{{0, 1}}), InvalidInput);
  CHECK_THROWS_AS(c.add(ExoTrace{{0, 1, 3, 0}}), InvalidInput);
  CHECK_THROWS_AS(TransitionCounts(4, 3, 2), InvalidInput);
}

TEST_CASE("memory-0 counts share one row per stage") {
  TransitionCounts c(3, 3, 0);
  c.add(ExoTrace{{0, 2, 1}});
  c.add(ExoTrace{{1, 2, 2}});
  CHECK(c.num_rows() == 1);
  CHECK(c.row_total(0, 0) == 2);
  CHECK(c.row_total(0, 2) == 2);
  const auto est = estimate_kernel(c);
  for (int xi = 0; xi < 3; ++xi) {
    CHECK(est.rows.prob(0, xi, 2) == 1.0);
    CHECK(est.rows.prob(1, xi, 1) == 0.5);
  }
}

TEST_CASE("update_counts leaves its input untouched") {
  const TransitionCounts empty(3, 2);
  const auto one = update_counts(empty, ExoTrace{{0, 1, 0}});
  CHECK(empty.total(0) == 0);
  CHECK(one.total(0) == 1);
}

TEST_CASE("estimate is the count ratio, uniform on unvisited rows") {
  TransitionCounts c(2, 3);
  c.add_cell(0, 0, 1, 3);
  c.add_cell(0, 0, 2, 1);
  const auto est = estimate_kernel(c);
  CHECK(est.rows.prob(0, 0, 1) == 0.75);
  CHECK(est.rows.prob(0, 0, 0) == 0.0);
  CHECK(est.rows.prob(0, 1, 2) == doctest::Approx(1.0 / 3));
  CHECK(est.row_count(0, 0) == 4);
  CHECK(est.row_count(0, 2) == 0);
}

TEST_CASE("estimate converges to the true kernel") {
  Rng rng(17);
  const auto mdp = make_tabular_benchmark(2, 4, 2, 3, 1.0, rng);
  TransitionCounts c(3, 4);
  for (int i = 0; i < 40000; ++i) c.add(sample_trace(mdp.true_kernel(), 3, static_cast<int>(rng() % 4), rng));
  const auto est = estimate_kernel(c);
  for (int t = 0; t < 2; ++t)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) CHECK(std::abs(est.rows.prob(t, a, b) - mdp.true_kernel().prob(t, a, b)) < 0.02);
}

TEST_CASE("bonus radius formula") {
  OptimismConfig cfg{0.3, 0.01, 250, 5};
  const double expect = 0.3 * std::sqrt(2.0 * 5 * std::log(250.0 * 5 / 0.01) / 7.0);
  CHECK(bonus_radius(cfg, 7) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(bonus_radius(cfg, 0) == bonus_radius(cfg, 1));
  CHECK_THROWS_AS((OptimismConfig{-1.0, 0.01, 1, 1}.validate()), InvalidInput);
  CHECK_THROWS_AS((OptimismConfig{0.3, 1.0, 1, 1}.validate()), InvalidInput);
}

TEST_CASE("optimistic row: small worked case") {
  const std::vector<double> row{0.5, 0.3, 0.2}, values{1.0, 3.0, 0.0};
  const auto q = optimistic_row(row, values, 0.6);
  // 0.3 moves onto index 1, taken from index 2 (0.2) then index 0 (0.1).
  CHECK(q[0] == doctest::Approx(0.4));
  CHECK(q[1] == doctest::Approx(0.6));
  CHECK(q[2] == doctest::Approx(0.0));
}

TEST_CASE("optimistic row properties") {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<double> row(n), values(n);
    double s = 0.0;
    for (auto& p : row) s += (p = uniform01(rng) < 0.2 ? 0.0 : uniform01(rng));
    if (s == 0.0) row[0] = s = 1.0;
    for (auto& p : row) p /= s;
    for (auto& v : values) v = std::floor(uniform01(rng) * 4);  // ties are common
    const double bonus = 2.5 * uniform01(rng);
    const auto q = optimistic_row(row, values, bonus);
    double sum = 0.0, l1 = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(q[i] >= -1e-15);
      sum += q[i];
      l1 += std::abs(q[i] - row[i]);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(l1 <= bonus + 1e-12);
    CHECK(dot(q, values) >= dot(row, values) - 1e-12);
    // Monotone in the radius.
    const auto q2 = optimistic_row(row, values, bonus + 0.1);
    CHECK(dot(q2, values) >= dot(q, values) - 1e-12);
  }
}

TEST_CASE("optimistic row: zero bonus is the identity, radius 2 is a point mass") {
  const std::vector<double> row{0.2, 0.3, 0.5}, values{2.0, 5.0, 1.0};
  CHECK(optimistic_row(row, values, 0.0) == row);
  const auto q = optimistic_row(row, values, 2.0);
  CHECK(q[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(optimistic_row(row, values, -0.1), InvalidInput);
}

TEST_CASE("optimistic row agrees with the grid oracle on three outcomes") {
  Rng rng(4);
  for (int c = 0; c < 30; ++c) {
    const long a = static_cast<long>(rng() % 101), b = static_cast<long>(rng() % (101 - a));
    const std::vector<long> units{a, b, 100 - a - b};
    const std::vector<double> row{a / 100.0, b / 100.0, (100 - a - b) / 100.0};
    const std::vector<double> values{uniform01(rng), uniform01(rng), uniform01(rng)};
    const long bonus = 2 * static_cast<long>(rng() % 60);
    const auto q = optimistic_row(row, values, bonus / 100.0);
    CHECK(dot(q, values) == doctest::Approx(oracle::grid_optimistic_value(units, values, bonus, 100)).epsilon(1e-9));
  }
}

TEST_CASE("subsampling: ratio 1 keeps everything") {
  TransitionCounts c(4, 3);
  Rng rng(8);
  for (int i = 0; i < 50; ++i) c.add(ExoTrace{{int(rng() % 3), int(rng() % 3), int(rng() % 3), int(rng() % 3)}});
  CHECK(subsample_counts(c, {1.0, 5}) == c);
  CHECK_THROWS_AS(subsample_counts(c, {0.0, 5}), InvalidInput);
}

TEST_CASE("subsampling thins each cell at the requested rate and is nested") {
  TransitionCounts c(2, 2);
  c.add_cell(0, 0, 0, 20000);
  c.add_cell(0, 1, 1, 20000);
  const auto lo = subsample_counts(c, {0.2, 42});
  const auto hi = subsample_counts(c, {0.8, 42});
  for (int r = 0; r < 2; ++r) {
    const double kept_lo = lo.at(0, r, r) / 20000.0, kept_hi = hi.at(0, r, r) / 20000.0;
    CHECK(std::abs(kept_lo - 0.2) < 5 * std::sqrt(0.16 / 20000));
    CHECK(std::abs(kept_hi - 0.8) < 5 * std::sqrt(0.16 / 20000));
    CHECK(lo.at(0, r, r) <= hi.at(0, r, r));
  }
  // Adding events never removes earlier kept ones.
  TransitionCounts more = c;
  more.add_cell(0, 0, 0, 500);
  CHECK(subsample_counts(more, {0.2, 42}).at(0, 0, 0) >= lo.at(0, 0, 0));
  CHECK(subsample_counts(c, {0.2, 42}) == lo);
}
