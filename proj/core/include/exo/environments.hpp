#pragma once

// Benchmark environment families.

#include <optional>
#include <vector>

#include "exo/core.hpp"
#include "exo/lfa.hpp"
#include "exo/rng.hpp"

namespace exo {

/// Random tabular Exo-MDP: r(x, a, xi) ~ Unif(0,1) i.i.d., endogenous map
/// f(x, a, xi') = (x + a + xi') mod |X|, and one Dirichlet(alpha) kernel
/// (drawn row by row) shared by every stage.
TabularExoMdp make_tabular_benchmark(int num_x, int num_xi, int num_a, int horizon,
                                     double dirichlet_alpha, Rng& rng);

/// Optional parameters for the storage benchmark; unset fields keep the
/// defaults (C = 10, a_max = 2, eta = 1, alpha = 1, alpha_c = 0.1,
/// beta = 0.01, prices 1..R).
struct StorageOverrides {
  std::optional<double> capacity;
  std::optional<double> a_max;
  std::optional<double> eta_plus;
  std::optional<double> eta_minus;
  std::optional<double> leakage;
  std::optional<double> trans_cost;
  std::optional<double> holding;
  std::optional<double> reward_sign;
  std::optional<bool> effective_trade;
  std::optional<std::vector<double>> prices;
};

struct StorageBenchmark {
  StorageSpec spec;
  HatBasis basis;
};

/// Row r of the price kernel: 0.7 split evenly over the feasible members of
/// {r-1, r, r+1} plus 0.3 / R on every state.
std::vector<double> storage_price_matrix(int num_prices);

StorageBenchmark make_storage_benchmark(int horizon, int num_prices, int num_anchors,
                                        const StorageOverrides& overrides = {});

}  // namespace exo
