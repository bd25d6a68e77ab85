#include <benchmark/benchmark.h>

#include <motifmine/motifmine.hpp>

using namespace motifmine;

namespace {

void BM_ForwardPass(benchmark::State& state) {
  MinerConfig c;
  const MinerModel m = MinerModel::init(c);
  Rng rng(1);
  const Graph g = erdos_renyi(static_cast<std::size_t>(state.range(0)), 0.1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(forward_pass(m, g, rng));
}
BENCHMARK(BM_ForwardPass)->Arg(20)->Arg(50)->Arg(100);

void BM_TrainEpoch(benchmark::State& state) {
  const DatasetBundle d = build_dataset({Topology::barbell, 10, 1, 1.0, 0.0}, 64, 2);
  MinerConfig c;
  c.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(d, c).trace.rep_loss.back());
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

void BM_EnumerateConnected(benchmark::State& state) {
  Rng rng(3);
  const Graph g = erdos_renyi(40, 0.1, rng);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_connected(g, k).size());
}
BENCHMARK(BM_EnumerateConnected)->DenseRange(3, 5);

void BM_ExactMine(benchmark::State& state) {
  const DatasetBundle d = build_dataset({Topology::clique, 4, 1, 1.0, 0.0}, 200, 4);
  for (auto _ : state) benchmark::DoNotOptimize(exact_mine(d, {}).classes.size());
}
BENCHMARK(BM_ExactMine)->Unit(benchmark::kMillisecond);

void BM_Decode(benchmark::State& state) {
  const DatasetBundle d = build_dataset({Topology::wheel, 7, 1, 1.0, 0.0}, 1000, 5);
  MinerConfig c;
  const MinerModel m = MinerModel::init(c);
  const DatasetLayers layers = forward_dataset(m, d.graphs, 6);
  const LshTable table = LshTable::make(16, c.dim, 7);
  for (auto _ : state) benchmark::DoNotOptimize(decode(layers, c.layers, table, 1, 0.2));
}
BENCHMARK(BM_Decode)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
