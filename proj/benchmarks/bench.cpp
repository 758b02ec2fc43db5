#include <benchmark/benchmark.h>

#include "dadmm/admm.hpp"
#include "dadmm/baselines.hpp"
#include "dadmm/digraph.hpp"
#include "dadmm/objective.hpp"
#include "dadmm/weights.hpp"

namespace {

dadmm::DiGraph bench_graph(int n) {
  return dadmm::generate_strongly_connected_digraph(n, 0.4, 1).first;
}

void BM_BuildWeightMatrix(benchmark::State& state) {
  const auto g = bench_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto W = dadmm::build_weight_matrix(g);
    benchmark::DoNotOptimize(W.delta);
  }
}
BENCHMARK(BM_BuildWeightMatrix)->Arg(10)->Arg(50)->Arg(100);

void BM_ComputeDelta(benchmark::State& state) {
  const auto g = bench_graph(static_cast<int>(state.range(0)));
  const auto W = dadmm::build_weight_matrix(g);
  for (auto _ : state) benchmark::DoNotOptimize(dadmm::compute_delta(W.entries));
}
BENCHMARK(BM_ComputeDelta)->Arg(10)->Arg(50)->Arg(100);

void BM_AdmmStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = bench_graph(n);
  const auto W = dadmm::build_weight_matrix(g);
  const auto obj = dadmm::generate_random_objective(n, 3, 3, 7);
  dadmm::AdmmParams params{1.0, static_cast<int>(state.range(1)), 1, 0.0};
  auto s = dadmm::make_admm_initial_state(obj);
  for (auto _ : state) {
    dadmm::admm_step(s, obj, W, params);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_AdmmStep)->Args({10, 1})->Args({10, 4})->Args({50, 1});

void BM_PushDigingStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = bench_graph(n);
  const Eigen::MatrixXd C = dadmm::out_degree_mixing_matrix(g);
  const auto obj = dadmm::generate_random_objective(n, 3, 3, 7);
  auto s = dadmm::make_pushdiging_initial_state(obj);
  for (auto _ : state) {
    dadmm::pushdiging_step(s, obj, C, 1e-3);
    benchmark::DoNotOptimize(s.z.data());
  }
}
BENCHMARK(BM_PushDigingStep)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
