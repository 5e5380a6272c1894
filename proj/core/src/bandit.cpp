#include "exo/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exo/core.hpp"
#include "exo/errors.hpp"

namespace exo {

ExoBandit::ExoBandit(int num_arms, int num_xi, std::vector<double> reward,
                     std::vector<double> exo_dist, double sigma)
    : num_arms_(num_arms),
      num_xi_(num_xi),
      reward_(std::move(reward)),
      exo_dist_(std::move(exo_dist)),
      sigma_(sigma) {
  if (num_arms < 1 || num_xi < 1) throw InvalidInput("ExoBandit: sizes must be positive");
  if (reward_.size() != static_cast<std::size_t>(num_arms) * num_xi) {
    throw InvalidInput("ExoBandit: reward table has wrong size");
  }
  if (exo_dist_.size() != static_cast<std::size_t>(num_xi)) {
    throw InvalidInput("ExoBandit: exo_dist has wrong length");
  }
  check_probability_vector(exo_dist_, "ExoBandit exo_dist");
}

std::vector<double> ExoBandit::means() const {
  std::vector<double> mu(static_cast<std::size_t>(num_arms_), 0.0);
  for (int a = 0; a < num_arms_; ++a) {
    for (int xi = 0; xi < num_xi_; ++xi) mu[static_cast<std::size_t>(a)] += exo_dist_[static_cast<std::size_t>(xi)] * reward(a, xi);
  }
  return mu;
}

ExoBandit make_gap_bandit(int num_arms, double gap, int num_xi) {
  if (num_arms < 1 || num_xi < 2) throw InvalidInput("make_gap_bandit: bad sizes");
  const double best_wins = (0.5 + gap) * num_xi;
  const double other_wins = 0.5 * num_xi;
  const auto best = static_cast<int>(std::lround(best_wins));
  const auto other = static_cast<int>(std::lround(other_wins));
  if (std::abs(best_wins - best) > 1e-9 || std::abs(other_wins - other) > 1e-9 || best > num_xi ||
      gap <= 0.0) {
    throw InvalidInput("make_gap_bandit: 1/2 and 1/2 + gap must be multiples of 1/num_xi");
  }
  std::vector<double> r(static_cast<std::size_t>(num_arms) * num_xi, 0.0);
  for (int xi = 0; xi < best; ++xi) r[static_cast<std::size_t>(xi)] = 1.0;
  for (int a = 1; a < num_arms; ++a) {
    const int shift = (2 * a) % num_xi;
    for (int j = 0; j < other; ++j) {
      r[static_cast<std::size_t>(a) * num_xi + (shift + j) % num_xi] = 1.0;
    }
  }
  return ExoBandit(num_arms, num_xi, std::move(r),
                   std::vector<double>(static_cast<std::size_t>(num_xi), 1.0 / num_xi), 0.5);
}

void FullInfoState::observe(const ExoBandit& bandit, int xi) {
  for (int a = 0; a < bandit.num_arms(); ++a) sums[static_cast<std::size_t>(a)] += bandit.reward(a, xi);
  ++rounds;
}

int ftl_select(const FullInfoState& state) {
  if (state.rounds == 0 || state.sums.empty()) return 0;
  const double n = static_cast<double>(state.rounds);
  int best = 0;
  double best_mean = state.sums[0] / n;
  for (std::size_t a = 1; a < state.sums.size(); ++a) {
    const double mean = state.sums[a] / n;
    if (mean > best_mean) {
      best_mean = mean;
      best = static_cast<int>(a);
    }
  }
  return best;
}

int ucb_select(const FullInfoState& state, double sigma, int num_arms, int horizon, double delta) {
  if (state.rounds == 0 || state.sums.empty()) return 0;
  const double n = static_cast<double>(state.rounds);
  const double bonus =
      std::sqrt(2.0 * sigma * sigma * std::log(num_arms * static_cast<double>(horizon) / delta) / n);
  int best = 0;
  double best_index = state.sums[0] / n + bonus;
  for (std::size_t a = 1; a < state.sums.size(); ++a) {
    const double index = state.sums[a] / n + bonus;
    if (index > best_index) {
      best_index = index;
      best = static_cast<int>(a);
    }
  }
  return best;
}

ExoBanditRun run_exo_bandit(const ExoBandit& bandit, BanditAlgo algo, int rounds, Rng& rng,
                            double delta) {
  if (rounds < 1) throw InvalidInput("run_exo_bandit: rounds must be >= 1");
  if (delta <= 0.0) delta = 1.0 / rounds;
  const auto mu = bandit.means();
  const double mu_star = *std::max_element(mu.begin(), mu.end());

  ExoBanditRun run;
  run.regret.reserve(static_cast<std::size_t>(rounds));
  run.model_error.reserve(static_cast<std::size_t>(rounds));
  FullInfoState state(bandit.num_arms());
  std::vector<double> freq(static_cast<std::size_t>(bandit.num_xi()), 0.0);

  for (int k = 0; k < rounds; ++k) {
    const int ftl = ftl_select(state);
    const int ucb = ucb_select(state, bandit.sigma(), bandit.num_arms(), rounds, delta);
    if (ftl != ucb) ++run.disagreements;
    const int arm = algo == BanditAlgo::ftl ? ftl : ucb;
    run.regret.push_back(mu_star - mu[static_cast<std::size_t>(arm)]);

    const auto xi = static_cast<int>(sample_categorical(bandit.exo_dist(), rng));
    state.observe(bandit, xi);
    freq[static_cast<std::size_t>(xi)] += 1.0;
    double err = 0.0;
    for (std::size_t i = 0; i < freq.size(); ++i) {
      err += std::abs(freq[i] / static_cast<double>(state.rounds) - bandit.exo_dist()[i]);
    }
    run.model_error.push_back(err);
  }
  return run;
}

void PegInstance::validate() const {
  if (means.size() < 2) throw InvalidInput("PegInstance: need at least two arms");
  for (double m : means) {
    if (!(m >= 0.0 && m <= 1.0)) throw InvalidInput("PegInstance: means must lie in [0,1]");
  }
  if (warm_start < 1) throw InvalidInput("PegInstance: warm_start must be >= 1");
  if (!(gap() > 0.0)) throw InvalidInput("PegInstance: the best arm must be unique");
}

int PegInstance::best_arm() const {
  return static_cast<int>(std::max_element(means.begin(), means.end()) - means.begin());
}

double PegInstance::gap() const {
  const int best = best_arm();
  double second = -1.0;
  for (std::size_t a = 0; a < means.size(); ++a) {
    if (static_cast<int>(a) != best) second = std::max(second, means[a]);
  }
  return means[static_cast<std::size_t>(best)] - second;
}

PegResult run_peg(const PegInstance& instance, int rounds, Rng& rng, bool record_rounds) {
  instance.validate();
  const int A = static_cast<int>(instance.means.size());
  const int L = instance.warm_start;
  if (rounds < A * L) throw InvalidInput("run_peg: rounds must be at least A * warm_start");

  const int best = instance.best_arm();
  const double mu_star = instance.means[static_cast<std::size_t>(best)];
  std::vector<double> successes(static_cast<std::size_t>(A), 0.0);
  std::vector<double> pulls(static_cast<std::size_t>(A), 0.0);

  PegResult result;
  if (record_rounds) result.per_round.reserve(static_cast<std::size_t>(rounds));

  auto pull = [&](int arm) {
    const auto a = static_cast<std::size_t>(arm);
    if (uniform01(rng) < instance.means[a]) successes[a] += 1.0;
    pulls[a] += 1.0;
    const double r = mu_star - instance.means[a];
    result.regret += r;
    if (record_rounds) result.per_round.push_back(r);
  };

  for (int a = 0; a < A; ++a) {
    for (int l = 0; l < L; ++l) pull(a);
  }

  const auto b = static_cast<std::size_t>(best);
  bool other_positive = false;
  for (std::size_t a = 0; a < successes.size(); ++a) {
    if (a != b && successes[a] > 0.0) other_positive = true;
  }
  result.barrier_hit = successes[b] == 0.0 && other_positive;

  for (int t = A * L; t < rounds; ++t) {
    int arm = 0;
    double best_mean = successes[0] / pulls[0];
    for (int a = 1; a < A; ++a) {
      const double m = successes[static_cast<std::size_t>(a)] / pulls[static_cast<std::size_t>(a)];
      if (m > best_mean) {
        best_mean = m;
        arm = a;
      }
    }
    if (arm == best) ++result.optimal_pulls_after_warm_start;
    pull(arm);
  }

  for (int a = 0; a < A; ++a) {
    const auto u = static_cast<std::size_t>(a);
    result.estimation_error =
        std::max(result.estimation_error, std::abs(successes[u] / pulls[u] - instance.means[u]));
  }
  return result;
}

double peg_barrier_probability(const PegInstance& instance) {
  instance.validate();
  const int best = instance.best_arm();
  const double L = instance.warm_start;
  double all_others_zero = 1.0;
  for (std::size_t a = 0; a < instance.means.size(); ++a) {
    if (static_cast<int>(a) != best) all_others_zero *= std::pow(1.0 - instance.means[a], L);
  }
  return std::pow(1.0 - instance.means[static_cast<std::size_t>(best)], L) * (1.0 - all_others_zero);
}

}  // namespace exo
