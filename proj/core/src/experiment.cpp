#include "exo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "exo/bandit.hpp"
#include "exo/environments.hpp"
#include "exo/errors.hpp"
#include "exo/evaluation.hpp"
#include "exo/kernels.hpp"
#include "exo/lfa.hpp"
#include "exo/tabular_planner.hpp"

namespace exo {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_kind(const ExperimentConfig& cfg, ExperimentKind kind) {
  if (cfg.experiment != kind) {
    throw ConfigError("experiment: expected " + std::string(to_string(kind)) + ", got " +
                      std::string(to_string(cfg.experiment)));
  }
}

RegretMode regret_mode(const AlgorithmParams& p) {
  return p.regret_mode == "fixed" ? RegretMode::fixed(p.regret_x1, p.regret_xi1) : RegretMode::summed();
}

// Subsampling stream depends on the seed and the full label, so pto_lite@0.2
// and pto_lite@0.8 thin independently.
SubsampleConfig lite_config(const ExperimentConfig& cfg, const AlgorithmLabel& label,
                            const std::string& name, std::uint64_t seed) {
  SubsampleConfig sc;
  sc.ratio = label.ratio.value_or(cfg.params.subsample_ratio);
  sc.seed = derive_seed(seed, {tag(name)});
  return sc;
}

Rng episode_rng(std::uint64_t seed, int k) {
  return Rng(derive_seed(seed, {tag("episode"), static_cast<std::uint64_t>(k)}));
}

std::vector<RunRecord> run_jobs(const ExperimentConfig& cfg,
                                const std::function<std::vector<RunRecord>(const std::string&, std::uint64_t)>& fn) {
  const int n_alg = static_cast<int>(cfg.algorithms.size());
  const int n_seed = static_cast<int>(cfg.seeds.size());
  std::vector<std::vector<RunRecord>> parts(static_cast<std::size_t>(n_alg) * n_seed);
  parallel_for(static_cast<int>(parts.size()), cfg.threads, [&](int job) {
    const auto& alg = cfg.algorithms[static_cast<std::size_t>(job / n_seed)];
    const auto seed = cfg.seeds[static_cast<std::size_t>(job % n_seed)];
    parts[static_cast<std::size_t>(job)] = fn(alg, seed);
  });
  std::vector<RunRecord> out;
  for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  sort_records(out);
  return out;
}

}  // namespace

void sort_records(std::vector<RunRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.algorithm, a.seed, a.episode) < std::tie(b.algorithm, b.seed, b.episode);
  });
}

void parallel_for(int count, int threads, const std::function<void(int)>& job) {
  if (count <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, count);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      {
        std::lock_guard lock(error_mutex);
        if (error) return;
      }
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

std::vector<RunRecord> run_tabular_learner(const ExperimentConfig& cfg, const std::string& algorithm,
                                           std::uint64_t seed, const LearnerOptions& options) {
  check_kind(cfg, ExperimentKind::tabular);
  const auto label = parse_algorithm_label(algorithm);
  const auto& tp = cfg.tabular;
  Rng env_rng(derive_seed(seed, {tag("env")}));
  const TabularExoMdp mdp =
      make_tabular_benchmark(tp.num_x, tp.num_xi, tp.num_a, tp.horizon, tp.dirichlet_alpha, env_rng);
  const ValueTable v_star = pto_plan(mdp, mdp.true_kernel()).v;
  const RegretMode mode = regret_mode(cfg.params);

  OptimismConfig opt;
  opt.c = cfg.params.c;
  opt.delta = cfg.params.delta;
  opt.episodes = cfg.episodes;
  opt.num_xi = tp.num_xi;

  TransitionCounts counts(tp.horizon, tp.num_xi, tp.memory);
  std::vector<ExoTrace> history;
  std::vector<RunRecord> out;
  out.reserve(static_cast<std::size_t>(cfg.episodes));
  double cumulative = 0.0;

  for (int k = 1; k <= cfg.episodes; ++k) {
    const auto t0 = Clock::now();
    EmpiricalKernel estimate;
    if (options.kernel_override) {
      estimate = EmpiricalKernel::from_kernel(*options.kernel_override);
    } else if (label.base == "pto_lite") {
      estimate = estimate_kernel(subsample_counts(counts, lite_config(cfg, label, algorithm, seed)));
    } else {
      estimate = estimate_kernel(counts);
    }

    TabularPolicy policy;
    if (label.base == "pto") {
      policy = pto_plan(mdp, estimate).policy;
    } else if (label.base == "pto_opt") {
      policy = pto_opt_plan(mdp, estimate, opt).policy;
    } else if (label.base == "pto_lite") {
      policy = pto_plan(mdp, estimate).policy;
    } else if (label.base == "ftl_erm") {
      policy = ftl_erm_plan(mdp, history, tp.x1, cfg.params.policy_cap);
    } else {
      throw ConfigError("algorithms: '" + algorithm + "' is not a tabular algorithm");
    }

    RunRecord rec;
    rec.experiment = "tabular";
    rec.algorithm = algorithm;
    rec.seed = seed;
    rec.episode = k;
    rec.instant_regret = instantaneous_regret(mdp, v_star, policy, mode);
    cumulative += rec.instant_regret;
    rec.cumulative_regret = cumulative;
    rec.model_error = model_error_frobenius(estimate, mdp.true_kernel());
    rec.wall_time_ms = cfg.record_timing ? elapsed_ms(t0) : 0.0;
    out.push_back(std::move(rec));

    Rng rng = episode_rng(seed, k);
    const auto xi1 = static_cast<int>(sample_categorical(mdp.initial_distribution(), rng));
    EpisodeLog log = simulate_episode(mdp, policy, tp.x1, xi1, rng);
    counts.add(log.trace);
    if (label.base == "ftl_erm") history.push_back(std::move(log.trace));
  }
  return out;
}

std::vector<RunRecord> run_storage_learner(const ExperimentConfig& cfg, const std::string& algorithm,
                                           std::uint64_t seed, const LearnerOptions& options) {
  check_kind(cfg, ExperimentKind::storage);
  const auto label = parse_algorithm_label(algorithm);
  if (label.base != "lsvi_pe" && label.base != "lsvi_opt" && label.base != "lsvi_lite") {
    throw ConfigError("algorithms: '" + algorithm + "' is not a storage algorithm");
  }
  const auto& sp = cfg.storage;
  StorageOverrides o;
  o.capacity = sp.capacity;
  o.a_max = sp.a_max;
  o.eta_plus = sp.eta_plus;
  o.eta_minus = sp.eta_minus;
  o.leakage = sp.leakage;
  o.trans_cost = sp.trans_cost;
  o.holding = sp.holding;
  o.reward_sign = sp.reward_sign;
  o.effective_trade = sp.effective_trade;
  o.prices = sp.prices;
  const StorageBenchmark bench = make_storage_benchmark(sp.horizon, sp.num_prices, sp.num_anchors, o);
  const StorageSpec& spec = bench.spec;

  Rng eval_rng(derive_seed(seed, {tag("eval")}));
  const StorageRegretEvaluator evaluator(spec, sp.start_levels, sp.eval_rollouts,
                                         sp.oracle_anchor_factor * sp.num_anchors, eval_rng);

  std::optional<OptimismConfig> opt;
  if (label.base == "lsvi_opt") {
    opt = OptimismConfig{cfg.params.c, cfg.params.delta, cfg.episodes, sp.num_prices};
  }

  const std::vector<double> uniform(static_cast<std::size_t>(sp.num_prices), 1.0 / sp.num_prices);
  TransitionCounts counts(sp.horizon, sp.num_prices, 1);
  std::vector<RunRecord> out;
  out.reserve(static_cast<std::size_t>(cfg.episodes));
  double cumulative = 0.0;

  for (int k = 1; k <= cfg.episodes; ++k) {
    const auto t0 = Clock::now();
    EmpiricalKernel estimate;
    if (options.kernel_override) {
      estimate = EmpiricalKernel::from_kernel(*options.kernel_override);
    } else if (label.base == "lsvi_lite") {
      estimate = estimate_kernel(subsample_counts(counts, lite_config(cfg, label, algorithm, seed)));
    } else {
      estimate = estimate_kernel(counts);
    }
    const WeightTable w = lsvi_backward_pass(spec, bench.basis, estimate, opt);

    RunRecord rec;
    rec.experiment = "storage";
    rec.algorithm = algorithm;
    rec.seed = seed;
    rec.episode = k;
    rec.instant_regret = evaluator.regret(bench.basis, w).mean;
    cumulative += rec.instant_regret;
    rec.cumulative_regret = cumulative;
    rec.model_error = model_error_frobenius(estimate, spec.price_kernel);
    rec.wall_time_ms = cfg.record_timing ? elapsed_ms(t0) : 0.0;
    out.push_back(std::move(rec));

    // The price trace does not depend on the stored level, so only the
    // exogenous path is needed to update the counts.
    Rng rng = episode_rng(seed, k);
    const auto xi1 = static_cast<int>(sample_categorical(uniform, rng));
    counts.add(sample_trace(spec.price_kernel, spec.horizon, xi1, rng));
  }
  return out;
}

std::vector<RunRecord> run_bandit_learner(const ExperimentConfig& cfg, const std::string& algorithm,
                                          std::uint64_t seed) {
  check_kind(cfg, ExperimentKind::bandit);
  BanditAlgo algo;
  if (algorithm == "ftl") {
    algo = BanditAlgo::ftl;
  } else if (algorithm == "ucb") {
    algo = BanditAlgo::ucb;
  } else {
    throw ConfigError("algorithms: '" + algorithm + "' is not a bandit algorithm");
  }
  const auto& bp = cfg.bandit;
  const ExoBandit base = make_gap_bandit(bp.num_arms, bp.gap, bp.num_outcomes);
  std::vector<double> reward(static_cast<std::size_t>(base.num_arms()) * base.num_xi());
  for (int a = 0; a < base.num_arms(); ++a) {
    for (int xi = 0; xi < base.num_xi(); ++xi) reward[static_cast<std::size_t>(a) * base.num_xi() + xi] = base.reward(a, xi);
  }
  const ExoBandit bandit(base.num_arms(), base.num_xi(), std::move(reward),
                         std::vector<double>(base.exo_dist().begin(), base.exo_dist().end()), bp.sigma);

  Rng rng(derive_seed(seed, {tag("bandit")}));
  const auto t0 = Clock::now();
  const ExoBanditRun run = run_exo_bandit(bandit, algo, cfg.episodes, rng, bp.delta);
  const double per_round_ms = cfg.record_timing ? elapsed_ms(t0) / cfg.episodes : 0.0;

  std::vector<RunRecord> out;
  out.reserve(run.regret.size());
  double cumulative = 0.0;
  for (std::size_t i = 0; i < run.regret.size(); ++i) {
    RunRecord rec;
    rec.experiment = "bandit";
    rec.algorithm = algorithm;
    rec.seed = seed;
    rec.episode = static_cast<int>(i) + 1;
    rec.instant_regret = run.regret[i];
    cumulative += rec.instant_regret;
    rec.cumulative_regret = cumulative;
    rec.model_error = run.model_error[i];
    rec.wall_time_ms = per_round_ms;
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<RunRecord> run_tabular_experiment(const ExperimentConfig& cfg) {
  check_kind(cfg, ExperimentKind::tabular);
  return run_jobs(cfg, [&](const std::string& alg, std::uint64_t seed) { return run_tabular_learner(cfg, alg, seed); });
}

std::vector<RunRecord> run_storage_experiment(const ExperimentConfig& cfg) {
  check_kind(cfg, ExperimentKind::storage);
  return run_jobs(cfg, [&](const std::string& alg, std::uint64_t seed) { return run_storage_learner(cfg, alg, seed); });
}

std::vector<RunRecord> run_bandit_experiment(const ExperimentConfig& cfg) {
  check_kind(cfg, ExperimentKind::bandit);
  return run_jobs(cfg, [&](const std::string& alg, std::uint64_t seed) { return run_bandit_learner(cfg, alg, seed); });
}

PegExperimentResult run_peg_experiment(const ExperimentConfig& cfg) {
  check_kind(cfg, ExperimentKind::peg);
  PegInstance inst;
  inst.means = cfg.peg.means;
  inst.warm_start = cfg.peg.warm_start;
  inst.validate();

  const auto n = cfg.seeds.size();
  std::vector<PegResult> results(n);
  parallel_for(static_cast<int>(n), cfg.threads, [&](int i) {
    Rng rng(derive_seed(cfg.seeds[static_cast<std::size_t>(i)], {tag("peg")}));
    results[static_cast<std::size_t>(i)] = run_peg(inst, cfg.episodes, rng, cfg.peg.per_round_records);
  });

  PegExperimentResult out;
  std::vector<double> regrets;
  regrets.reserve(n);
  int barrier = 0;
  double est = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const PegResult& r = results[i];
    regrets.push_back(r.regret);
    barrier += r.barrier_hit ? 1 : 0;
    est += r.estimation_error;
    for (const auto& alg : cfg.algorithms) {
      auto emit = [&](int episode, double instant, double cumulative) {
        RunRecord rec;
        rec.experiment = "peg";
        rec.algorithm = alg;
        rec.seed = cfg.seeds[i];
        rec.episode = episode;
        rec.instant_regret = instant;
        rec.cumulative_regret = cumulative;
        rec.model_error = r.estimation_error;
        out.records.push_back(std::move(rec));
      };
      if (cfg.peg.per_round_records) {
        double cumulative = 0.0;
        for (std::size_t t = 0; t < r.per_round.size(); ++t) {
          cumulative += r.per_round[t];
          emit(static_cast<int>(t) + 1, r.per_round[t], cumulative);
        }
      } else {
        emit(cfg.episodes, r.regret, r.regret);
      }
    }
  }
  sort_records(out.records);

  const MeanWithError m = mean_and_se(regrets);
  const int A = static_cast<int>(inst.means.size());
  out.summary.runs = static_cast<int>(n);
  out.summary.rounds = cfg.episodes;
  out.summary.mean_regret = m.mean;
  out.summary.se_regret = m.se;
  out.summary.barrier_frequency = static_cast<double>(barrier) / static_cast<double>(n);
  out.summary.barrier_probability = peg_barrier_probability(inst);
  out.summary.regret_lower_bound =
      out.summary.barrier_probability * inst.gap() * (cfg.episodes - A * inst.warm_start);
  out.summary.mean_estimation_error = est / static_cast<double>(n);
  return out;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::tabular: return run_tabular_experiment(cfg);
    case ExperimentKind::storage: return run_storage_experiment(cfg);
    case ExperimentKind::bandit: return run_bandit_experiment(cfg);
    case ExperimentKind::peg: return run_peg_experiment(cfg).records;
  }
  return {};
}

}  // namespace exo
