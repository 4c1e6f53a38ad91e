#include "multiway/linalg.hpp"
#include "multiway/products.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace multiway;

DenseTensor cube(std::size_t n, Rng& rng) {
  const Vector v = random_gaussian_vector(n * n * n, rng);
  return DenseTensor({n, n, n}, std::vector<double>(v.data(), v.data() + v.size()));
}

void BM_Unfold(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto mode = static_cast<std::size_t>(state.range(1));
  const DenseTensor t = cube(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(unfold(t, mode));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * t.size() * sizeof(double)));
}
BENCHMARK(BM_Unfold)->ArgsProduct({{16, 64}, {0, 1, 2}});

void BM_ModeProduct(benchmark::State& state) {
  Rng rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseTensor t = cube(n, rng);
  const Matrix m = random_gaussian(n / 2, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mode_n_product(t, m, 1));
}
BENCHMARK(BM_ModeProduct)->RangeMultiplier(2)->Range(16, 64);

void BM_KhatriRao(benchmark::State& state) {
  Rng rng(3);
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_gaussian(rows, 8, rng);
  const Matrix b = random_gaussian(rows, 8, rng);
  for (auto _ : state) benchmark::DoNotOptimize(khatri_rao(a, b));
}
BENCHMARK(BM_KhatriRao)->RangeMultiplier(4)->Range(16, 256);

}  // namespace

BENCHMARK_MAIN();
