#include <benchmark/benchmark.h>

#include <motifmine/motifmine.hpp>

using namespace motifmine;

namespace {

Eigen::MatrixXd random_cost(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd c(n, m);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = rng.uniform();
  return c;
}

void BM_Assignment(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Eigen::MatrixXd cost = random_cost(n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_min_assignment(cost).cost);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Assignment)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_TransportUnequal(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Eigen::MatrixXd cost = random_cost(n, n + 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(uniform_transport_cost(cost));
}
BENCHMARK(BM_TransportUnequal)->Arg(4)->Arg(8)->Arg(16);

void BM_SimG(benchmark::State& state) {
  Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph a = init_features(erdos_renyi(n, 0.3, rng), 10);
  const Graph b = init_features(erdos_renyi(n, 0.3, rng), 10);
  for (auto _ : state) benchmark::DoNotOptimize(sim_g(a, b));
}
BENCHMARK(BM_SimG)->Arg(3)->Arg(5)->Arg(10)->Arg(20);

void BM_KnnDensity(benchmark::State& state) {
  Rng rng(4);
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Eigen::MatrixXd pts(n, 8);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(knn_density_all(pts, pts, 16, true));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KnnDensity)->RangeMultiplier(2)->Range(64, 2048)->Complexity();

}  // namespace
