#include "exo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "exo/errors.hpp"

namespace exo {

TransitionCounts::TransitionCounts(int horizon, int num_xi, int memory)
    : horizon_(horizon), num_xi_(num_xi), memory_(memory) {
  if (horizon < 1 || num_xi < 1) throw InvalidInput("TransitionCounts: bad shape");
  if (memory != 0 && memory != 1) {
    throw InvalidInput("TransitionCounts: only memory 0 (i.i.d.) and 1 (Markov) are supported");
  }
  n_.assign(static_cast<std::size_t>(stages()) * num_rows() * num_xi_, 0);
}

void TransitionCounts::add(const ExoTrace& trace) {
  if (trace.xi.size() != static_cast<std::size_t>(horizon_)) {
    throw InvalidInput("TransitionCounts::add: trace length must equal the horizon");
  }
  for (int xi : trace.xi) {
    if (xi < 0 || xi >= num_xi_) throw InvalidInput("TransitionCounts::add: index out of range");
  }
  for (int t = 0; t < stages(); ++t) {
    const auto u = static_cast<std::size_t>(t);
    ++n_[index(t, row_index(trace.xi[u]), trace.xi[u + 1])];
  }
}

void TransitionCounts::add_cell(int stage, int row, int next, std::uint64_t n) {
  if (stage < 0 || stage >= stages() || row < 0 || row >= num_xi_ || next < 0 || next >= num_xi_) {
    throw InvalidInput("TransitionCounts::add_cell: index out of range");
  }
  n_[index(stage, row_index(row), next)] += n;
}

std::uint64_t TransitionCounts::at(int stage, int row, int next) const {
  return n_[index(stage, row_index(row), next)];
}

std::uint64_t TransitionCounts::row_total(int stage, int xi) const {
  const auto begin = n_.begin() + static_cast<std::ptrdiff_t>(index(stage, row_index(xi), 0));
  return std::accumulate(begin, begin + num_xi_, std::uint64_t{0});
}

std::uint64_t TransitionCounts::total(int stage) const {
  std::uint64_t sum = 0;
  for (int r = 0; r < num_rows(); ++r) sum += row_total(stage, memory_ == 0 ? 0 : r);
  return sum;
}

TransitionCounts update_counts(TransitionCounts counts, const ExoTrace& trace) {
  counts.add(trace);
  return counts;
}

EmpiricalKernel EmpiricalKernel::from_kernel(ExoKernel kernel, std::uint64_t count_per_row) {
  EmpiricalKernel out;
  out.row_counts.assign(static_cast<std::size_t>(kernel.stages()) * kernel.num_xi(), count_per_row);
  out.rows = std::move(kernel);
  return out;
}

EmpiricalKernel estimate_kernel(const TransitionCounts& counts) {
  const int Y = counts.num_xi();
  const int T = counts.stages();
  std::vector<double> p(static_cast<std::size_t>(T) * Y * Y);
  std::vector<std::uint64_t> totals(static_cast<std::size_t>(T) * Y);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < Y; ++i) {
      const std::uint64_t total = counts.row_total(t, i);
      totals[static_cast<std::size_t>(t) * Y + i] = total;
      double* row = p.data() + (static_cast<std::size_t>(t) * Y + i) * Y;
      for (int j = 0; j < Y; ++j) {
        row[j] = total > 0 ? static_cast<double>(counts.at(t, i, j)) / static_cast<double>(total)
                           : 1.0 / Y;
      }
    }
  }
  return {ExoKernel(T, Y, std::move(p)), std::move(totals)};
}

void OptimismConfig::validate() const {
  if (!(c >= 0.0)) throw InvalidInput("OptimismConfig: c must be nonnegative");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("OptimismConfig: delta must be in (0,1)");
  if (episodes < 1 || num_xi < 1) throw InvalidInput("OptimismConfig: K and Y must be positive");
}

double bonus_radius(const OptimismConfig& cfg, std::uint64_t row_count) {
  const double n = static_cast<double>(std::max<std::uint64_t>(row_count, 1));
  const double Y = cfg.num_xi;
  return cfg.c * std::sqrt(2.0 * Y * std::log(cfg.episodes * Y / cfg.delta) / n);
}

void optimistic_row_into(std::span<const double> row, std::span<const double> values, double bonus,
                         std::span<double> out, std::vector<int>& order) {
  const std::size_t n = row.size();
  std::copy(row.begin(), row.end(), out.begin());
  if (n == 0 || !(bonus > 0.0)) return;

  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] > values[best]) best = i;
  }
  double mass = std::min(bonus / 2.0, 1.0 - row[best]);
  if (!(mass > 0.0)) return;

  order.resize(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)]; });

  double moved = 0.0;
  for (int idx : order) {
    const auto i = static_cast<std::size_t>(idx);
    if (i == best) continue;
    const double take = std::min(out[i], mass - moved);
    out[i] -= take;
    moved += take;
    if (moved >= mass) break;
  }
  out[best] += moved;
}

std::vector<double> optimistic_row(std::span<const double> row, std::span<const double> values,
                                   double bonus) {
  if (row.size() != values.size()) throw InvalidInput("optimistic_row: size mismatch");
  if (bonus < 0.0) throw InvalidInput("optimistic_row: bonus must be nonnegative");
  std::vector<double> out(row.size());
  std::vector<int> order;
  optimistic_row_into(row, values, bonus, out, order);
  return out;
}

void SubsampleConfig::validate() const {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw InvalidInput("SubsampleConfig: ratio must be in (0,1]");
}

TransitionCounts subsample_counts(const TransitionCounts& counts, const SubsampleConfig& cfg) {
  cfg.validate();
  TransitionCounts out(counts.horizon(), counts.num_xi(), counts.memory());
  if (cfg.ratio >= 1.0) return counts;
  for (int t = 0; t < counts.stages(); ++t) {
    for (int r = 0; r < counts.num_rows(); ++r) {
      for (int j = 0; j < counts.num_xi(); ++j) {
        const std::uint64_t n = counts.at(t, r, j);
        if (n == 0) continue;
        const std::uint64_t cell = derive_seed(cfg.seed, {static_cast<std::uint64_t>(t),
                                                          static_cast<std::uint64_t>(r),
                                                          static_cast<std::uint64_t>(j)});
        std::uint64_t kept = 0;
        for (std::uint64_t e = 0; e < n; ++e) {
          if (to_unit_interval(splitmix64(cell + e)) < cfg.ratio) ++kept;
        }
        if (kept > 0) out.add_cell(t, r, j, kept);
      }
    }
  }
  return out;
}

}  // namespace exo
