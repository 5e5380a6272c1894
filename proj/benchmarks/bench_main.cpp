#include <benchmark/benchmark.h>

#include "exo/environments.hpp"
#include "exo/evaluation.hpp"
#include "exo/experiment.hpp"
#include "exo/kernels.hpp"
#include "exo/lfa.hpp"
#include "exo/tabular_planner.hpp"

namespace {

exo::TabularExoMdp tabular(int x, int xi, int a, int h) {
  exo::Rng rng(1);
  return exo::make_tabular_benchmark(x, xi, a, h, 1.0, rng);
}

void BM_PtoPlan(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto mdp = tabular(n, n, 3, 5);
  for (auto _ : st) benchmark::DoNotOptimize(exo::pto_plan(mdp, mdp.true_kernel()));
}
BENCHMARK(BM_PtoPlan)->Arg(5)->Arg(10)->Arg(20);

void BM_PtoOptPlan(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto mdp = tabular(n, n, 3, 5);
  const auto est = exo::EmpiricalKernel::from_kernel(mdp.true_kernel(), 10);
  const exo::OptimismConfig cfg{0.3, 0.01, 250, n};
  for (auto _ : st) benchmark::DoNotOptimize(exo::pto_opt_plan(mdp, est, cfg));
}
BENCHMARK(BM_PtoOptPlan)->Arg(5)->Arg(10)->Arg(20);

void BM_OptimisticRow(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  std::vector<double> row(n, 1.0 / static_cast<double>(n)), values(n), out(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<double>((i * 7919) % n);
  std::vector<int> scratch;
  for (auto _ : st) {
    exo::optimistic_row_into(row, values, 0.4, out, scratch);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_OptimisticRow)->Arg(5)->Arg(50)->Arg(500);

void BM_GreedyAction(benchmark::State& st) {
  const auto bench = exo::make_storage_benchmark(6, 10, static_cast<int>(st.range(0)));
  std::vector<double> w(bench.basis.dim());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(i % 3);
  double x = 0.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(exo::lsvi_greedy_action(bench.spec, bench.basis, w, x, 3));
    x = x > 9.0 ? 0.0 : x + 0.37;
  }
}
BENCHMARK(BM_GreedyAction)->Arg(10)->Arg(40);

void BM_LsviPass(benchmark::State& st) {
  const int h = static_cast<int>(st.range(0));
  const auto bench = exo::make_storage_benchmark(h, 10, static_cast<int>(st.range(1)));
  const auto est = exo::EmpiricalKernel::from_kernel(bench.spec.price_kernel, 10);
  for (auto _ : st) benchmark::DoNotOptimize(exo::lsvi_backward_pass(bench.spec, bench.basis, est));
}
BENCHMARK(BM_LsviPass)->Args({6, 10})->Args({10, 10})->Args({6, 40});

void BM_TabularLearner(benchmark::State& st) {
  auto cfg = exo::default_config(exo::ExperimentKind::tabular);
  cfg.episodes = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(exo::run_tabular_learner(cfg, "pto", 0));
}
BENCHMARK(BM_TabularLearner)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_StorageLearner(benchmark::State& st) {
  auto cfg = exo::default_config(exo::ExperimentKind::storage);
  cfg.episodes = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(exo::run_storage_learner(cfg, "lsvi_pe", 0));
}
BENCHMARK(BM_StorageLearner)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
