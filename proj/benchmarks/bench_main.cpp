#include <benchmark/benchmark.h>

#include "lcc/baselines.hpp"
#include "lcc/eval.hpp"
#include "lcc/fqcc.hpp"
#include "lcc/generators.hpp"
#include "lcc/kernel.hpp"
#include "lcc/lcc.hpp"
#include "lcc/rng.hpp"

using namespace lcc;

namespace {

// m rows, n features, class +1 shifted by 1 along every axis.
Dataset shifted_gaussians(std::size_t m, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  std::vector<Label> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    y[i] = i % 2 == 0 ? Label::Negative : Label::Positive;
    for (std::size_t j = 0; j < n; ++j)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.normal() + (y[i] == Label::Positive ? 1.0 : 0.0);
  }
  return Dataset(std::move(x), std::move(y));
}

void train_lcc_route(benchmark::State& state, LccRoute route) {
  const Dataset d = shifted_gaussians(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(train_lcc(d, LccParams{}, route).objective);
}

void BM_TrainLccDual(benchmark::State& state) { train_lcc_route(state, LccRoute::Dual); }
void BM_TrainLccPrimal(benchmark::State& state) { train_lcc_route(state, LccRoute::Primal); }

void BM_TrainFqcc(benchmark::State& state) {
  const Dataset d = shifted_gaussians(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(train_fqcc(d).objective_achieved);
}

void BM_TrainKlcc(benchmark::State& state) {
  const Dataset d = gen_shape(Shape::Spiral, static_cast<std::size_t>(state.range(0)), default_noise(Shape::Spiral), 1);
  const KernelSpec spec{KernelKind::Rbf, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(train_klcc(d, spec).objective);
}

void BM_RbfGram(benchmark::State& state) {
  const Dataset d = shifted_gaussians(static_cast<std::size_t>(state.range(0)), 10, 2);
  const KernelSpec spec{KernelKind::Rbf, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(gram(spec, d).sum());
}

void BM_TrainSvm(benchmark::State& state) {
  const Dataset d = shifted_gaussians(static_cast<std::size_t>(state.range(0)), 10, 3);
  for (auto _ : state) benchmark::DoNotOptimize(train_linear_svm(d).intercept);
}

void BM_RocAuc(benchmark::State& state) {
  Rng rng(4);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> scores(n);
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.normal();
    labels[i] = i % 2 == 0 ? Label::Negative : Label::Positive;
  }
  for (auto _ : state) benchmark::DoNotOptimize(roc_auc(scores, labels).auc);
}

}  // namespace

BENCHMARK(BM_TrainLccDual)->Args({200, 2})->Args({500, 10})->Args({2000, 30})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainLccPrimal)->Args({200, 2})->Args({500, 10})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainFqcc)->Args({200, 2})->Args({500, 10})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainKlcc)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RbfGram)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainSvm)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RocAuc)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
