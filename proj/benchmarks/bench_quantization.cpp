#include <benchmark/benchmark.h>

#include "dinglab/hessians.hpp"
#include "dinglab/quantization.hpp"

namespace {

using namespace dinglab;

const QuadratureGrid& bench_grid() {
  static const QuadratureGrid g = make_grid(64, 128);
  return g;
}

PolynomialPotential bench_potential() {
  return PolynomialPotential(0.3 * SmoothFunction::coordinate(2));
}

void BM_hilb(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const PolynomialPotential phi = bench_potential();
  for (auto _ : state)
    benchmark::DoNotOptimize(hilb(phi, k, bench_grid()).gram());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_hilb)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Complexity();

void BM_q_ding_hessian(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const PolynomialPotential phi = bench_potential();
  const QuantizedFrame frame = make_frame(phi, k, bench_grid());
  const Eigen::MatrixXcd q =
      q_matrix(PolyField(SmoothFunction::coordinate(2)), frame, phi, bench_grid());
  for (auto _ : state)
    benchmark::DoNotOptimize(q_ding_hessian(q, q, frame.H, k, bench_grid()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_q_ding_hessian)->Arg(4)->Arg(8)->Arg(16)->Complexity();

void BM_q_hessian_spectrum(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const HermitianForm h0 = hilb(bench_potential(), k, bench_grid());
  for (auto _ : state)
    benchmark::DoNotOptimize(q_hessian_spectrum(h0, k, bench_grid()));
}
BENCHMARK(BM_q_hessian_spectrum)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
