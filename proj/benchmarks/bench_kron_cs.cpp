#include "multiway/experiments.hpp"
#include "multiway/kron_cs.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace multiway;

void BM_KronApply(benchmark::State& state) {
  Rng rng(20);
  const auto n = static_cast<std::size_t>(state.range(0));
  auto p = experiments::planted_block_sparse({n, n, n}, {n, n, n}, 2, true, rng);
  const DenseTensor g = p.core.to_dense();
  for (auto _ : state) benchmark::DoNotOptimize(kron_apply(p.dictionary, g));
}
BENCHMARK(BM_KronApply)->Arg(8)->Arg(16)->Arg(32);

void BM_KroneckerOmp(benchmark::State& state) {
  Rng rng(21);
  const auto n = static_cast<std::size_t>(state.range(0));
  auto p = experiments::planted_block_sparse({n, n, n}, {n, n, n}, 2, true, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kronecker_omp(p.measurements, p.dictionary, 8));
}
BENCHMARK(BM_KroneckerOmp)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Nbomp(benchmark::State& state) {
  Rng rng(22);
  const auto n = static_cast<std::size_t>(state.range(0));
  auto p = experiments::planted_block_sparse({n, n, n}, {n, n, n}, 2, true, rng);
  for (auto _ : state) benchmark::DoNotOptimize(n_bomp(p.measurements, p.dictionary, 2));
}
BENCHMARK(BM_Nbomp)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_CubePipeline(benchmark::State& state) {
  experiments::CsConfig cfg;
  cfg.shape = {32, 32, 8};
  cfg.komp_sparsity = 64;
  for (auto _ : state) benchmark::DoNotOptimize(experiments::run_cs_pipeline(cfg, 42));
}
BENCHMARK(BM_CubePipeline)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
