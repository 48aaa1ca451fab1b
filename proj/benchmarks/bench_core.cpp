#include <benchmark/benchmark.h>

#include <vector>

#include "sigma/decompositions.hpp"
#include "sigma/generators.hpp"
#include "sigma/path_calculus.hpp"
#include "sigma/random_sources.hpp"

using namespace sigma;

static void BM_FillNormal(benchmark::State& state) {
  const GaussianStream stream(StreamKey{1, 0, 0});
  std::vector<double> z(static_cast<std::size_t>(state.range(0)));
  std::uint64_t offset = 0;
  for (auto _ : state) {
    stream.fill_normal(offset, z);
    offset += z.size();
    benchmark::DoNotOptimize(z.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FillNormal)->Arg(4096)->Arg(65536);

static void BM_GenBrownian(benchmark::State& state) {
  const TimeGrid grid(1.0, static_cast<std::size_t>(state.range(0)));
  std::uint32_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen_brownian(grid, {1, i++, 0}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenBrownian)->Arg(1 << 14)->Arg(1 << 16);

static void BM_GenBessel3(benchmark::State& state) {
  const TimeGrid grid(64.0, static_cast<std::size_t>(state.range(0)));
  std::uint32_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen_bessel3(grid, 1.0, {1, i++, 0}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenBessel3)->Arg(1 << 14);

static void BM_SkorokhodMap(benchmark::State& state) {
  const Path b = gen_brownian(TimeGrid(1.0, static_cast<std::size_t>(state.range(0))), {2, 0, 0});
  for (auto _ : state) benchmark::DoNotOptimize(skorokhod_map(b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SkorokhodMap)->Arg(1 << 16);

static void BM_SigmaCompose(benchmark::State& state) {
  const Path m = gen_exp_martingale(TimeGrid(1.0, static_cast<std::size_t>(state.range(0))), {3, 0, 0});
  for (auto _ : state) benchmark::DoNotOptimize(sigma_compose(m));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SigmaCompose)->Arg(1 << 16);

static void BM_TanakaLocalTime(benchmark::State& state) {
  const Path b = gen_brownian(TimeGrid(1.0, static_cast<std::size_t>(state.range(0))), {4, 0, 0});
  for (auto _ : state) benchmark::DoNotOptimize(local_time_tanaka(b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TanakaLocalTime)->Arg(1 << 16);

BENCHMARK_MAIN();
