#include "multiway/btd.hpp"
#include "multiway/cpd.hpp"
#include "multiway/linalg.hpp"
#include "multiway/tensorize.hpp"
#include "multiway/tt.hpp"
#include "multiway/tucker.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace multiway;

DenseTensor low_rank(std::size_t n, std::size_t rank, Rng& rng) {
  CPModel m;
  m.weights = Vector::Ones(static_cast<Eigen::Index>(rank));
  for (int k = 0; k < 3; ++k) m.factors.push_back(random_gaussian(n, rank, rng));
  return cpd_reconstruct(m);
}

void BM_CpdAls(benchmark::State& state) {
  Rng rng(10);
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseTensor t = low_rank(n, 3, rng);
  CpAlsOptions opts;
  opts.max_iters = 50;
  opts.tol = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(cpd_als(t, 3, opts));
}
BENCHMARK(BM_CpdAls)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Mlsvd(benchmark::State& state) {
  Rng rng(11);
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseTensor t = low_rank(n, 4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mlsvd(t));
}
BENCHMARK(BM_Mlsvd)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Hooi(benchmark::State& state) {
  Rng rng(12);
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseTensor t = low_rank(n, 6, rng);
  HooiOptions opts;
  opts.max_iters = 20;
  opts.tol = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(hooi(t, {3, 3, 3}, opts));
}
BENCHMARK(BM_Hooi)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

// Hankel tensor of two damped oscillations seen through five channels.
void BM_BtdLl1(benchmark::State& state) {
  Rng rng(13);
  const Eigen::Index len = 60;
  Matrix s(2, len);
  for (Eigen::Index k = 0; k < len; ++k) {
    const double t = static_cast<double>(k) / 240.0;
    s(0, k) = std::sin(6 * M_PI * t);
    s(1, k) = std::exp(10 * t) * std::sin(20 * M_PI * t);
  }
  const Matrix x = random_gaussian(5, 2, rng) * s;
  const DenseTensor t = hankel_tensorize(x, 24, 37);
  BtdOptions opts;
  opts.restarts = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(btd_ll1_als(t, 2, 2, opts));
}
BENCHMARK(BM_BtdLl1)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_TtSvd(benchmark::State& state) {
  Rng rng(14);
  const auto order = static_cast<std::size_t>(state.range(0));
  const Vector v = random_gaussian_vector(std::size_t{1} << order, rng);
  const DenseTensor t = quantize(v, 2);
  for (auto _ : state) benchmark::DoNotOptimize(tt_svd(t, 1e-8));
}
BENCHMARK(BM_TtSvd)->DenseRange(10, 16, 2)->Unit(benchmark::kMillisecond);

void BM_QttExponential(benchmark::State& state) {
  const auto length = std::size_t{1} << state.range(0);
  Vector v(static_cast<Eigen::Index>(length));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = std::pow(0.9999, static_cast<double>(k));
  for (auto _ : state) benchmark::DoNotOptimize(qtt_decompose(v, 2, 1e-12));
}
BENCHMARK(BM_QttExponential)->DenseRange(10, 18, 4)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
