#pragma once

// Backward induction on tabular Exo-MDPs with a plug-in exogenous kernel.

#include <cstdint>
#include <span>
#include <vector>

#include "exo/core.hpp"
#include "exo/kernels.hpp"

namespace exo {

struct PlannerOutput {
  TabularPolicy policy;
  std::vector<double> q;  // [h][x][xi][a]
  ValueTable v;

  double q_at(int h, int x, int xi, int a) const {
    const auto& d = v.dims();
    return q[((static_cast<std::size_t>(h) * d.num_x + x) * d.num_xi + xi) * d.num_a + a];
  }
};

/// Q_h(x, xi, a) = r(x, a, xi) + sum_xi' P_h(xi'|xi) V_{h+1}(f(x, a, xi'), xi'),
/// with zero continuation at the last stage. Ties go to the lowest action.
PlannerOutput pto_plan(const TabularExoMdp& mdp, const ExoKernel& kernel);
PlannerOutput pto_plan(const TabularExoMdp& mdp, const EmpiricalKernel& kernel);

/// Same recursion, but each expectation is taken under optimistic_row of the
/// empirical row against the continuation values of that (x, a), with radius
/// bonus_radius(cfg, row count).
PlannerOutput pto_opt_plan(const TabularExoMdp& mdp, const EmpiricalKernel& kernel,
                           const OptimismConfig& cfg);

inline constexpr std::uint64_t kDefaultPolicyCap = std::uint64_t{1} << 20;

/// Number of deterministic Markov policies, |A|^(H |X| |Xi|), as a double.
double policy_space_size(const TabularDims& dims);

/// Exhaustive follow-the-leader: scores every deterministic policy by its
/// mean hindsight value over `traces` from x1 and returns the best one
/// (lexicographically smallest action vector on ties). Throws CapacityError
/// when the policy space exceeds policy_cap.
TabularPolicy ftl_erm_plan(const TabularExoMdp& mdp, std::span<const ExoTrace> traces, int x1,
                           std::uint64_t policy_cap = kDefaultPolicyCap);

}  // namespace exo
