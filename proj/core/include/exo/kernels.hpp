#pragma once

// Estimation of the exogenous kernel from observed traces.

#include <cstdint>
#include <span>
#include <vector>

#include "exo/core.hpp"

namespace exo {

/// Transition counts N[t][xi][xi'] per kernel stage.
///
/// memory == 1: first-order Markov counts, one row per conditioning state.
/// memory == 0: i.i.d. exogenous process; a single row per stage holds the
/// marginal counts of xi_{t+1}, and every conditioning state shares it.
class TransitionCounts {
 public:
  TransitionCounts() = default;
  TransitionCounts(int horizon, int num_xi, int memory = 1);

  /// Adds one trace: H-1 cells are incremented.
  void add(const ExoTrace& trace);

  /// Adds `n` events to a single cell. `row` is ignored for memory 0.
  void add_cell(int stage, int row, int next, std::uint64_t n);

  std::uint64_t at(int stage, int row, int next) const;
  /// Total events in the row that conditions on xi (shared row for memory 0).
  std::uint64_t row_total(int stage, int xi) const;
  std::uint64_t total(int stage) const;

  int horizon() const noexcept { return horizon_; }
  int stages() const noexcept { return horizon_ > 0 ? horizon_ - 1 : 0; }
  int num_xi() const noexcept { return num_xi_; }
  int memory() const noexcept { return memory_; }
  int num_rows() const noexcept { return memory_ == 0 ? 1 : num_xi_; }

  friend bool operator==(const TransitionCounts&, const TransitionCounts&) = default;

 private:
  int row_index(int xi) const noexcept { return memory_ == 0 ? 0 : xi; }
  std::size_t index(int stage, int row, int next) const noexcept {
    return (static_cast<std::size_t>(stage) * num_rows() + row) * num_xi_ + next;
  }

  int horizon_ = 0;
  int num_xi_ = 0;
  int memory_ = 1;
  std::vector<std::uint64_t> n_;
};

/// Returns counts with `trace` added.
TransitionCounts update_counts(TransitionCounts counts, const ExoTrace& trace);

/// Row-stochastic estimate plus the per-(stage, xi) sample sizes behind it.
struct EmpiricalKernel {
  ExoKernel rows;
  std::vector<std::uint64_t> row_counts;  // [stage][xi]

  std::uint64_t row_count(int stage, int xi) const {
    return row_counts[static_cast<std::size_t>(stage) * rows.num_xi() + xi];
  }

  /// Wraps a known kernel with a fixed pseudo-count on every row.
  static EmpiricalKernel from_kernel(ExoKernel kernel, std::uint64_t count_per_row = 0);
};

/// Count ratios on visited rows, uniform 1/|Xi| on unvisited rows.
EmpiricalKernel estimate_kernel(const TransitionCounts& counts);

struct OptimismConfig {
  double c = 0.3;
  double delta = 0.01;
  int episodes = 1;  // K
  int num_xi = 1;    // Y

  void validate() const;
};

/// c * sqrt(2 Y ln(K Y / delta) / max(row_count, 1)).
double bonus_radius(const OptimismConfig& cfg, std::uint64_t row_count);

/// Maximizes sum_i q_i values_i over probability vectors q with
/// ||q - row||_1 <= bonus. Moves min(bonus/2, 1 - row[best]) onto the best
/// index (lowest index among equal values) and takes it from the lowest-value
/// entries first (ties by ascending index).
std::vector<double> optimistic_row(std::span<const double> row, std::span<const double> values,
                                   double bonus);

/// In-place variant for hot loops; `out` must have row.size() entries and
/// `order` is scratch space.
void optimistic_row_into(std::span<const double> row, std::span<const double> values, double bonus,
                         std::span<double> out, std::vector<int>& order);

struct SubsampleConfig {
  double ratio = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Bernoulli thinning of individual transition events. Event e of cell
/// (t, row, xi') is kept iff hash(seed, t, row, xi', e) < ratio, so the
/// decision for a given event never changes as more data arrives.
TransitionCounts subsample_counts(const TransitionCounts& counts, const SubsampleConfig& cfg);

}  // namespace exo
