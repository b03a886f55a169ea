// Serial reference vs OpenMP replication kernels on the full-size experiment workload.

#include <benchmark/benchmark.h>

#include "bsched/control.hpp"
#include "bsched/experiment.hpp"
#include "bsched/monte_carlo.hpp"

namespace {

bsched::SgdExperiment sgd_workload() {
  bsched::LinRegParams p;
  const double chi0 = bsched::chi0_for_gamma(p, bsched::kDefaultGamma);
  const double gamma = bsched::gamma_of(p, chi0);
  auto sched = bsched::schedule_from_alpha(bsched::linreg_schedule_factory(gamma, p.kappa, 1024, 0.01), 8192, 1024);
  return {p, sched, 0.01, chi0};
}

bsched::SdeExperiment sde_workload() {
  bsched::LinRegParams p;
  const double chi0 = bsched::chi0_for_gamma(p, bsched::kDefaultGamma);
  const auto grid = bsched::default_grid(2.56);
  auto alpha = bsched::linreg_alpha(bsched::gamma_of(p, chi0), p.kappa, 300.0, grid);
  return {bsched::make_linreg(p), alpha, 0.05, chi0, 1};
}

void BM_SgdSerial(benchmark::State& state) {
  const auto e = sgd_workload();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bsched::sgd_excess_risk_serial(e, static_cast<std::size_t>(state.range(0)), 7));
  }
}

void BM_SgdParallel(benchmark::State& state) {
  const auto e = sgd_workload();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bsched::sgd_excess_risk_parallel(e, static_cast<std::size_t>(state.range(0)), 7));
  }
}

void BM_SdeSerial(benchmark::State& state) {
  const auto e = sde_workload();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bsched::sde_terminal_excess_risk_serial(e, static_cast<std::size_t>(state.range(0)), 7));
  }
}

void BM_SdeParallel(benchmark::State& state) {
  const auto e = sde_workload();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bsched::sde_terminal_excess_risk_parallel(e, static_cast<std::size_t>(state.range(0)), 7));
  }
}

}  // namespace

BENCHMARK(BM_SgdSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SgdParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SdeSerial)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SdeParallel)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
