#include <random>

#include <benchmark/benchmark.h>

#include "minimax/trsub.hpp"

namespace {

using minimax::Matrix;
using minimax::TRProblem;
using minimax::Vector;

TRProblem random_tr(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = z(rng);
  TRProblem p;
  p.H = 0.5 * (A + A.transpose()) / std::sqrt(static_cast<double>(n));
  p.g = Vector::NullaryExpr(n, [&] { return z(rng); });
  p.reg = 0.1;
  p.radius = 1.0;
  return p;
}

void BM_TrExact(benchmark::State& state) {
  const TRProblem p = random_tr(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(minimax::solve_tr_exact(p));
}
BENCHMARK(BM_TrExact)->RangeMultiplier(4)->Range(8, 512);

void BM_TrCg(benchmark::State& state) {
  const TRProblem p = random_tr(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(minimax::solve_tr_cg(p, 10));
}
BENCHMARK(BM_TrCg)->RangeMultiplier(4)->Range(8, 512);

void BM_MinEigDense(benchmark::State& state) {
  const TRProblem p = random_tr(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(minimax::dense_min_eigpair(p.H));
}
BENCHMARK(BM_MinEigDense)->RangeMultiplier(4)->Range(32, 1024);

void BM_MinEigLanczos(benchmark::State& state) {
  const TRProblem p = random_tr(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(minimax::lanczos_min_eigpair(p.H, 3));
}
BENCHMARK(BM_MinEigLanczos)->RangeMultiplier(4)->Range(32, 1024);

}  // namespace
