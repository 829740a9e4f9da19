#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "polyens/complex_matrix.hpp"
#include "polyens/ensemble.hpp"
#include "polyens/invertible.hpp"
#include "polyens/oracle.hpp"
#include "polyens/quadrature.hpp"

using namespace polyens;

namespace {

ComplexMatrix filled_matrix(std::size_t n) {
  ComplexMatrix m(n, n);
  std::uint64_t entry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double g0, g1;
      rng::normal_pair(3, 0, entry++, g0, g1);
      m(i, j) = Complex(g0, g1);
    }
  }
  return m;
}

void BM_Det(benchmark::State& state) {
  ComplexMatrix m = filled_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(det(m));
  }
}
BENCHMARK(BM_Det)->Arg(4)->Arg(8)->Arg(12);

void BM_GaussLaguerreRule(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gauss_laguerre(static_cast<std::size_t>(state.range(0)), 1.0));
  }
}
BENCHMARK(BM_GaussLaguerreRule)->Arg(200)->Arg(400);

void BM_RatioExpectation(benchmark::State& state) {
  InvertibleEnsemble ens = gue_ext({1.0, -0.3});
  RatioQuery q{{Complex(0.3)}, {Complex(1.0, 1.0)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ratio_expectation(ens, q));
  }
}
BENCHMARK(BM_RatioExpectation);

void BM_Kernel(benchmark::State& state) {
  InvertibleEnsemble ens = gue_ext({0.5, -0.5, 0.9});
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel(ens, x, -x));
    x += 1e-6;
  }
}
BENCHMARK(BM_Kernel);

void BM_SampleGue(benchmark::State& state) {
  std::vector<double> a{0.5, -0.5, 0.9};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_gue_ext(a, 64, 9));
  }
}
BENCHMARK(BM_SampleGue);

}  // namespace

BENCHMARK_MAIN();
