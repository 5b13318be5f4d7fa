// Serial reference vs OpenMP Monte Carlo spread estimator.
#include <benchmark/benchmark.h>

#include <map>

#include <omp.h>

#include "bopim/diffusion.hpp"
#include "bopim/synthetic.hpp"

namespace {

const bopim::TemporalGraph& graph(std::size_t n) {
  static std::map<std::size_t, bopim::TemporalGraph> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    bopim::ProximityModel m;
    m.n = n;
    m.steps = 400;
    auto c = bopim::generate_proximity_contacts(m, 1);
    it = cache.emplace(n, bopim::aggregate(c, 10)).first;
  }
  return it->second;
}

void BM_Serial(benchmark::State& state) {
  const auto& g = graph(static_cast<std::size_t>(state.range(0)));
  bopim::SeedSet s(g.num_nodes(), {0, 1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(bopim::estimate_spread_serial(g, s, 0.05, 1000, 7));
  state.SetItemsProcessed(state.iterations() * 1000);
}

void BM_Parallel(benchmark::State& state) {
  const auto& g = graph(static_cast<std::size_t>(state.range(0)));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  bopim::SeedSet s(g.num_nodes(), {0, 1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(bopim::estimate_spread(g, s, 0.05, 1000, 7));
  state.SetItemsProcessed(state.iterations() * 1000);
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)
    ->ArgsProduct({{64, 512}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
