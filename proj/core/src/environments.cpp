#include "exo/environments.hpp"

#include <algorithm>
#include <random>

#include "exo/errors.hpp"

namespace exo {

TabularExoMdp make_tabular_benchmark(int num_x, int num_xi, int num_a, int horizon,
                                     double dirichlet_alpha, Rng& rng) {
  if (num_x < 1 || num_xi < 1 || num_a < 1 || horizon < 1) {
    throw InvalidInput("make_tabular_benchmark: all sizes must be >= 1");
  }
  if (!(dirichlet_alpha > 0.0)) throw InvalidInput("make_tabular_benchmark: alpha must be positive");

  const TabularDims dims{horizon, num_x, num_xi, num_a};
  const auto cells = static_cast<std::size_t>(num_x) * num_a * num_xi;
  std::vector<double> reward(cells);
  for (double& r : reward) r = uniform01(rng);

  std::vector<int> endo(cells);
  for (int x = 0; x < num_x; ++x) {
    for (int a = 0; a < num_a; ++a) {
      for (int xi = 0; xi < num_xi; ++xi) {
        endo[(static_cast<std::size_t>(x) * num_a + a) * num_xi + xi] = (x + a + xi) % num_x;
      }
    }
  }

  std::gamma_distribution<double> gamma(dirichlet_alpha, 1.0);
  std::vector<double> matrix(static_cast<std::size_t>(num_xi) * num_xi);
  for (int i = 0; i < num_xi; ++i) {
    double* row = matrix.data() + static_cast<std::size_t>(i) * num_xi;
    double sum = 0.0;
    for (int j = 0; j < num_xi; ++j) {
      row[j] = gamma(rng);
      sum += row[j];
    }
    if (!(sum > 0.0)) {
      // Every gamma draw underflowed (tiny alpha): fall back to a point mass.
      row[0] = sum = 1.0;
    }
    for (int j = 0; j < num_xi; ++j) row[j] /= sum;
  }
  return TabularExoMdp(dims, std::move(reward), std::move(endo),
                       ExoKernel::homogeneous(horizon - 1, num_xi, matrix));
}

std::vector<double> storage_price_matrix(int num_prices) {
  if (num_prices < 1) throw InvalidInput("storage_price_matrix: need at least one price");
  const int R = num_prices;
  std::vector<double> p(static_cast<std::size_t>(R) * R, 0.3 / R);
  for (int r = 0; r < R; ++r) {
    const int lo = std::max(r - 1, 0);
    const int hi = std::min(r + 1, R - 1);
    const double share = 0.7 / (hi - lo + 1);
    for (int s = lo; s <= hi; ++s) p[static_cast<std::size_t>(r) * R + s] += share;
  }
  return p;
}

StorageBenchmark make_storage_benchmark(int horizon, int num_prices, int num_anchors,
                                        const StorageOverrides& o) {
  if (num_prices < 2 || num_anchors < 2) {
    throw InvalidInput("make_storage_benchmark: need R >= 2 and N >= 2");
  }
  StorageSpec spec;
  spec.horizon = horizon;
  spec.capacity = o.capacity.value_or(10.0);
  spec.a_max = o.a_max.value_or(2.0);
  spec.eta_plus = o.eta_plus.value_or(1.0);
  spec.eta_minus = o.eta_minus.value_or(1.0);
  spec.leakage = o.leakage.value_or(1.0);
  spec.trans_cost = o.trans_cost.value_or(0.1);
  spec.holding = o.holding.value_or(0.01);
  spec.reward_sign = o.reward_sign.value_or(1.0);
  spec.effective_trade = o.effective_trade.value_or(true);
  if (o.prices) {
    if (o.prices->size() != static_cast<std::size_t>(num_prices)) {
      throw InvalidInput("make_storage_benchmark: price codebook must have R entries");
    }
    spec.prices = *o.prices;
  } else {
    spec.prices.resize(static_cast<std::size_t>(num_prices));
    for (int r = 0; r < num_prices; ++r) spec.prices[static_cast<std::size_t>(r)] = r + 1.0;
  }
  spec.price_kernel = ExoKernel::homogeneous(horizon - 1, num_prices, storage_price_matrix(num_prices));
  spec.validate();
  return {spec, HatBasis(AnchorGrid::uniform(spec.capacity, num_anchors))};
}

}  // namespace exo
