#include "exo/tabular_planner.hpp"

#include <cmath>
#include <string>

#include "exo/errors.hpp"

namespace exo {

namespace {

void check_kernel_shape(const TabularExoMdp& mdp, const ExoKernel& kernel) {
  if (kernel.num_xi() != mdp.num_xi() || kernel.stages() != mdp.horizon() - 1) {
    throw InvalidInput("planner: kernel has " + std::to_string(kernel.stages()) + " stages over " +
                       std::to_string(kernel.num_xi()) + " states; expected " +
                       std::to_string(mdp.horizon() - 1) + " over " + std::to_string(mdp.num_xi()));
  }
}

// Shared backward induction. `continuation(h, x, a, xi, next_values)` returns
// the expected stage-(h+1) value; next_values[xi'] = V_{h+1}(f(x,a,xi'), xi').
template <class Continuation>
PlannerOutput backward_induction(const TabularExoMdp& mdp, Continuation&& continuation) {
  const TabularDims& d = mdp.dims();
  PlannerOutput out{TabularPolicy(d), std::vector<double>(static_cast<std::size_t>(d.horizon) * d.num_x * d.num_xi * d.num_a),
                    ValueTable(d)};
  std::vector<double> next_values(static_cast<std::size_t>(d.num_xi));

  for (int h = d.horizon - 1; h >= 0; --h) {
    const bool last = h == d.horizon - 1;
    for (int x = 0; x < d.num_x; ++x) {
      for (int xi = 0; xi < d.num_xi; ++xi) {
        int best_a = 0;
        double best_q = 0.0;
        for (int a = 0; a < d.num_a; ++a) {
          double q = mdp.reward(x, a, xi);
          if (!last) {
            for (int nxt = 0; nxt < d.num_xi; ++nxt) {
              next_values[static_cast<std::size_t>(nxt)] = out.v(h + 1, mdp.next_x(x, a, nxt), nxt);
            }
            q = q + continuation(h, x, a, xi, std::span<const double>(next_values));
          }
          out.q[((static_cast<std::size_t>(h) * d.num_x + x) * d.num_xi + xi) * d.num_a + a] = q;
          if (a == 0 || q > best_q) {
            best_q = q;
            best_a = a;
          }
        }
        out.policy.set(h, x, xi, best_a);
        out.v.at(h, x, xi) = best_q;
      }
    }
  }
  return out;
}

}  // namespace

PlannerOutput pto_plan(const TabularExoMdp& mdp, const ExoKernel& kernel) {
  check_kernel_shape(mdp, kernel);
  return backward_induction(mdp, [&](int h, int, int, int xi, std::span<const double> values) {
    const auto row = kernel.row(h, xi);
    double s = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * values[j];
    return s;
  });
}

PlannerOutput pto_plan(const TabularExoMdp& mdp, const EmpiricalKernel& kernel) {
  return pto_plan(mdp, kernel.rows);
}

PlannerOutput pto_opt_plan(const TabularExoMdp& mdp, const EmpiricalKernel& kernel,
                           const OptimismConfig& cfg) {
  cfg.validate();
  check_kernel_shape(mdp, kernel.rows);
  std::vector<double> tilted(static_cast<std::size_t>(mdp.num_xi()));
  std::vector<int> scratch;
  return backward_induction(mdp, [&](int h, int, int, int xi, std::span<const double> values) {
    const double bonus = bonus_radius(cfg, kernel.row_count(h, xi));
    optimistic_row_into(kernel.rows.row(h, xi), values, bonus, tilted, scratch);
    double s = 0.0;
    for (std::size_t j = 0; j < tilted.size(); ++j) s += tilted[j] * values[j];
    return s;
  });
}

double policy_space_size(const TabularDims& dims) {
  return std::pow(static_cast<double>(dims.num_a),
                  static_cast<double>(dims.horizon) * dims.num_x * dims.num_xi);
}

TabularPolicy ftl_erm_plan(const TabularExoMdp& mdp, std::span<const ExoTrace> traces, int x1,
                           std::uint64_t policy_cap) {
  const TabularDims& d = mdp.dims();
  const double size = policy_space_size(d);
  if (size > static_cast<double>(policy_cap)) {
    throw CapacityError("ftl_erm_plan: policy space has " + std::to_string(size) +
                            " policies; a policy_cap of at least that is required",
                        size);
  }
  for (const auto& tr : traces) {
    if (tr.xi.size() != static_cast<std::size_t>(d.horizon)) {
      throw InvalidInput("ftl_erm_plan: trace length must equal the horizon");
    }
  }
  mdp.check_state(x1, 0);

  std::vector<int> digits(static_cast<std::size_t>(d.horizon) * d.num_x * d.num_xi, 0);
  TabularPolicy candidate(d, digits);
  TabularPolicy best = candidate;
  double best_score = 0.0;
  bool first = true;

  while (true) {
    double score = 0.0;
    for (const auto& tr : traces) score += hindsight_value(mdp, candidate, x1, tr);
    if (first || score > best_score) {
      best_score = score;
      best = candidate;
      first = false;
    }
    // Lexicographic successor: the last entry varies fastest.
    std::size_t pos = digits.size();
    while (pos > 0) {
      --pos;
      if (++digits[pos] < d.num_a) break;
      digits[pos] = 0;
      if (pos == 0) return best;
    }
    if (digits.empty()) return best;
    candidate = TabularPolicy(d, digits);
  }
}

}  // namespace exo
