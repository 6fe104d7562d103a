#include <benchmark/benchmark.h>

#include <vector>

#include "lagsw/functionals.hpp"
#include "lagsw/initcond.hpp"
#include "lagsw/solver.hpp"
#include "lagsw/tridiagonal.hpp"

namespace {

using namespace lagsw;

SimParams bench_params(int cells, Formulation f) {
  SimParams p;
  p.cells = cells;
  p.formulation = f;
  return p;
}

void BM_Tridiagonal(benchmark::State& bm) {
  const auto n = static_cast<std::size_t>(bm.range(0));
  SymmetricTridiagonal a(n);
  for (std::size_t i = 0; i < n; ++i) a.diag[i] = 4.0;
  for (std::size_t i = 0; i + 1 < n; ++i) a.off[i] = -1.0;
  std::vector<double> rhs(n);
  for (auto _ : bm) {
    std::fill(rhs.begin(), rhs.end(), 1.0);
    solve_tridiagonal(a, rhs);
    benchmark::DoNotOptimize(rhs.data());
  }
  bm.SetComplexityN(bm.range(0));
}
BENCHMARK(BM_Tridiagonal)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

template <Formulation F>
void BM_Step(benchmark::State& bm) {
  const auto p = bench_params(static_cast<int>(bm.range(0)), F);
  const State st = init::normalize_and_sample(init::preset("gaussian_bump", {}, p), p);
  const double dt = solver::stable_dt(st, p);
  for (auto _ : bm) benchmark::DoNotOptimize(solver::step(st, dt, p));
  bm.SetComplexityN(bm.range(0));
}
BENCHMARK(BM_Step<Formulation::primitive>)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oN);
BENCHMARK(BM_Step<Formulation::effective>)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oN);

void BM_Record(benchmark::State& bm) {
  const auto p = bench_params(static_cast<int>(bm.range(0)), Formulation::primitive);
  const State s0 = init::normalize_and_sample(init::preset("entropy_layer", {}, p), p);
  const double dt = solver::stable_dt(s0, p);
  const State s1 = solver::step(s0, dt, p).state;
  for (auto _ : bm)
    benchmark::DoNotOptimize(functionals::record(s1, p, functionals::PreviousStep{s0, dt}));
}
BENCHMARK(BM_Record)->Arg(256)->Arg(1024);

void BM_Advance(benchmark::State& bm) {
  const auto p = bench_params(256, Formulation::primitive);
  const State st = init::normalize_and_sample(init::preset("gaussian_bump", {}, p), p);
  for (auto _ : bm) benchmark::DoNotOptimize(solver::advance_to(st, 0.1, p));
}
BENCHMARK(BM_Advance)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
