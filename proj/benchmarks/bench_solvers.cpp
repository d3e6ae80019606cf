#include <benchmark/benchmark.h>

#include "randopt/randopt.hpp"

using namespace randopt;

namespace {

CubicSubproblem random_subproblem(Eigen::Index n, std::uint64_t seed) {
  RngStream rng(seed);
  const Matrix a = Matrix::NullaryExpr(n, n, [&] { return rng.normal(); });
  return {rng.normal_vector(n), 0.5 * (a + a.transpose()), 1.0 + rng.uniform(), 0.5};
}

void BM_SolveCubic(benchmark::State& state) {
  const auto sub = random_subproblem(state.range(0), 17);
  for (auto _ : state) benchmark::DoNotOptimize(solve_cubic(sub));
}
BENCHMARK(BM_SolveCubic)->Arg(2)->Arg(5)->Arg(20)->Arg(100);

void BM_LineSearchQuadratic(benchmark::State& state) {
  auto f = make_quadratic(state.range(0), 10.0, 1);
  OracleConfig oc;
  oc.p = 0.8;
  SyntheticLinearOracle oracle(oc);
  StoppingRule stop;
  stop.eps = 1e-6;
  std::size_t iters = 0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    RngStream rng(++seed);
    const auto tr = run_linesearch(*f, Vector::Ones(state.range(0)), oracle, LsConfig{}, stop, rng);
    iters += tr.records.size();
  }
  state.counters["iterations"] = benchmark::Counter(double(iters), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_LineSearchQuadratic)->Arg(4)->Arg(50);

void BM_LineSearchRosenbrock(benchmark::State& state) {
  auto f = make_rosenbrock(2, -2.0, 2.0);
  OracleConfig oc;
  oc.p = 0.8;
  SyntheticLinearOracle oracle(oc);
  StoppingRule stop;
  stop.eps = 1e-3;
  Vector x0(2);
  x0 << -1.2, 1.0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    RngStream rng(++seed);
    benchmark::DoNotOptimize(run_linesearch(*f, x0, oracle, LsConfig{}, stop, rng));
  }
}
BENCHMARK(BM_LineSearchRosenbrock)->Unit(benchmark::kMillisecond);

void BM_ArcRosenbrock(benchmark::State& state) {
  auto f = make_rosenbrock(2, -2.0, 2.0);
  OracleConfig oc;
  oc.p = 0.8;
  SyntheticQuadraticOracle oracle(oc);
  Vector x0(2);
  x0 << -1.2, 1.0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    RngStream rng(++seed);
    benchmark::DoNotOptimize(run_arc(*f, x0, oracle, ArcConfig{}, 1e-6, rng));
  }
}
BENCHMARK(BM_ArcRosenbrock)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
