#include <benchmark/benchmark.h>

#include "spinlab/detect.hpp"
#include "spinlab/exact.hpp"
#include "spinlab/samplers.hpp"

using namespace spinlab;

namespace {

void BM_Enumerate(benchmark::State& state, Kernel kernel) {
  const auto g = build_lattice(2, 4);
  const int extra = static_cast<int>(state.range(0));
  // Side-4 box with `extra` further spins attached to the corner: 16 + extra free spins.
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (int k = 0; k < extra; ++k) edges.push_back({static_cast<Vertex>(k % 16), static_cast<Vertex>(16 + k), 1.0});
  const auto big = build_custom(16 + extra, std::move(edges));
  const auto p = IsingParams::uniform_field(big.size(), 0.4, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(exact_moments(big, p, kernel).log_z);
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << big.size()));
}

void BM_Sweep(benchmark::State& state, UpdateKind kind) {
  const auto g = build_lattice(2, static_cast<int>(state.range(0)));
  const auto p = IsingParams::zero_field(g.size(), critical_beta::square_lattice());
  Rng rng(1);
  SpinConfig x = random_config(g, Boundary::Free, rng);
  ClusterUpdater cu(g, p);
  for (auto _ : state) {
    if (kind == UpdateKind::Glauber)
      glauber_sweep(x, g, p, rng);
    else
      cu.sweep(x, rng);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

void BM_SampleSums(benchmark::State& state) {
  const auto g = build_lattice(2, 32);
  const auto p = IsingParams::uniform_field(g.size(), 0.3, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(sample_sums(g, p, 64, 7, SamplerChoice::Cluster, 100));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Enumerate, serial, Kernel::Serial)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Enumerate, parallel, Kernel::Parallel)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, glauber, UpdateKind::Glauber)->Arg(32)->Arg(128);
BENCHMARK_CAPTURE(BM_Sweep, cluster, UpdateKind::Cluster)->Arg(32)->Arg(128);
BENCHMARK(BM_SampleSums)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
