#include <benchmark/benchmark.h>

#include "minimax/drivers.hpp"
#include "minimax/problems.hpp"

namespace {

using namespace minimax;

const ClosedFormProblem& chain() {
  static const ClosedFormProblem cf = [] {
    const SaddleChainParams p = make_saddle_chain_params(10, 5, 1.0, 1.0);
    return saddle_chain_problem(p, estimate_saddle_chain_constants(p));
  }();
  return cf;
}

void BM_SaddleChainEval(benchmark::State& state) {
  const SaddleChainParams p = make_saddle_chain_params(10, 5, 1.0, 1.0);
  const Vector x = sample_saddle_chain_interior(p, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(saddle_chain_value(x, p));
    benchmark::DoNotOptimize(saddle_chain_grad(x, p));
    benchmark::DoNotOptimize(saddle_chain_hess(x, p));
  }
}
BENCHMARK(BM_SaddleChainEval);

template <SolverResult (*Run)(const MinimaxProblem&, const Vector&, const Vector&,
                              const SolverConfig&)>
void BM_ChainSolve(benchmark::State& state) {
  const ClosedFormProblem& cf = chain();
  const Vector x0 = Vector::Constant(cf.problem.dim_x, 1e-3);
  const Vector y0 = Vector::Zero(cf.problem.dim_y);
  SolverConfig cfg;
  cfg.epsilon = 1e-2;
  cfg.certify_final = false;
  long outer = 0;
  for (auto _ : state) {
    const SolverResult r = Run(cf.problem, x0, y0, cfg);
    outer = static_cast<long>(r.trace.size());
    benchmark::DoNotOptimize(r.x_final.data());
  }
  state.counters["outer_iters"] = static_cast<double>(outer);
}
BENCHMARK(BM_ChainSolve<run_grtr>)->Name("BM_ChainGrtr")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChainSolve<run_lmnegcur>)->Name("BM_ChainLmNegCur")->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
