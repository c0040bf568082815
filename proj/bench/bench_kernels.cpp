// Serial reference vs OpenMP kernels. Run with --benchmark_filter to narrow.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "blockopt/benchmarks.hpp"
#include "blockopt/forest.hpp"
#include "blockopt/kernels.hpp"

namespace {

using namespace blockopt;

struct Fixture {
  RandomForest forest;
  Matrix pool{1024, 6};
};

Fixture& fixture() {
  static Fixture fx = [] {
    Fixture f;
    Rng rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix train(60, 6);
    std::vector<double> y(60);
    for (std::size_t i = 0; i < 60; ++i) {
      for (auto& v : train.row(i)) v = u(rng);
      y[i] = hartmann6(train.row(i));
    }
    f.forest.fit(train, y, rng);
    for (std::size_t i = 0; i < f.pool.rows(); ++i) {
      for (auto& v : f.pool.row(i)) v = u(rng);
    }
    return f;
  }();
  return fx;
}

void BM_EiSerial(benchmark::State& state) {
  auto& fx = fixture();
  std::vector<double> out(fx.pool.rows());
  for (auto _ : state) {
    kernels::ei_scores_serial(fx.forest, fx.pool, -1.0, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_EiParallel(benchmark::State& state) {
  auto& fx = fixture();
  std::vector<double> out(fx.pool.rows());
  for (auto _ : state) {
    kernels::ei_scores_parallel(fx.forest, fx.pool, -1.0, out);
    benchmark::DoNotOptimize(out.data());
  }
}

std::vector<std::vector<double>> branin_levels(std::size_t res) {
  const auto b = load_benchmark("branin");
  return grid_levels(b.space, res);
}

void BM_GridSerial(benchmark::State& state) {
  const auto b = load_benchmark("branin");
  const auto levels = branin_levels(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::grid_argmin_serial(levels, b.dense));
}

void BM_GridParallel(benchmark::State& state) {
  const auto b = load_benchmark("branin");
  const auto levels = branin_levels(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::grid_argmin_parallel(levels, b.dense));
}

}  // namespace

BENCHMARK(BM_EiSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EiParallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GridSerial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
