#include <doctest.h>

#include "exo/environments.hpp"
#include "exo/errors.hpp"

using namespace exo;

TEST_CASE("tabular benchmark structure") {
  Rng rng(10);
  const auto mdp = make_tabular_benchmark(5, 4, 3, 6, 1.0, rng);
  CHECK(mdp.true_kernel().stages() == 5);
  for (int x = 0; x < 5; ++x)
    for (int a = 0; a < 3; ++a)
      for (int xi = 0; xi < 4; ++xi) {
        CHECK(mdp.next_x(x, a, xi) == (x + a + xi) % 5);
        CHECK((mdp.reward(x, a, xi) >= 0.0 && mdp.reward(x, a, xi) < 1.0));
      }
  for (int t = 1; t < 5; ++t)
    for (int xi = 0; xi < 4; ++xi)
      for (int n = 0; n < 4; ++n) CHECK(mdp.true_kernel().prob(t, xi, n) == mdp.true_kernel().prob(0, xi, n));
}

TEST_CASE("tabular benchmark is a pure function of the stream") {
  Rng a(55), b(55), c(56);
  const auto m1 = make_tabular_benchmark(3, 3, 2, 4, 0.5, a);
  const auto m2 = make_tabular_benchmark(3, 3, 2, 4, 0.5, b);
  const auto m3 = make_tabular_benchmark(3, 3, 2, 4, 0.5, c);
  CHECK(m1.rewards() == m2.rewards());
  CHECK(m1.true_kernel() == m2.true_kernel());
  CHECK(m1.rewards() != m3.rewards());
  CHECK_THROWS_AS(make_tabular_benchmark(0, 3, 2, 4, 1.0, a), InvalidInput);
  CHECK_THROWS_AS(make_tabular_benchmark(3, 3, 2, 4, 0.0, a), InvalidInput);
}

TEST_CASE("horizon one has no kernel stages") {
  Rng rng(1);
  const auto mdp = make_tabular_benchmark(2, 2, 2, 1, 1.0, rng);
  CHECK(mdp.true_kernel().stages() == 0);
}

TEST_CASE("price matrix") {
  const auto p = storage_price_matrix(4);
  CHECK(p[0] == doctest::Approx(0.35 + 0.075));
  CHECK(p[1] == doctest::Approx(0.35 + 0.075));
  CHECK(p[2] == doctest::Approx(0.075));
  CHECK(p[1 * 4 + 0] == doctest::Approx(0.7 / 3 + 0.075));
  for (int r = 0; r < 4; ++r) {
    double s = 0;
    for (int c = 0; c < 4; ++c) s += p[r * 4 + c];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("storage benchmark defaults and overrides") {
  const auto b = make_storage_benchmark(6, 10, 10);
  CHECK(b.spec.capacity == 10.0);
  CHECK(b.spec.a_max == 2.0);
  CHECK(b.spec.trans_cost == 0.1);
  CHECK(b.spec.holding == 0.01);
  CHECK(b.spec.prices.back() == 10.0);
  CHECK(b.spec.price_kernel.stages() == 5);
  CHECK(b.basis.dim() == 10);

  StorageOverrides o;
  o.capacity = 4.0;
  o.prices = std::vector<double>{5, 6, 7};
  const auto c = make_storage_benchmark(3, 3, 4, o);
  CHECK(c.basis.grid().hi() == 4.0);
  CHECK(c.spec.prices[1] == 6.0);
  o.prices = std::vector<double>{5, 6};
  CHECK_THROWS_AS(make_storage_benchmark(3, 3, 4, o), InvalidInput);
  CHECK_THROWS_AS(make_storage_benchmark(3, 1, 4), InvalidInput);
}
