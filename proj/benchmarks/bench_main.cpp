#include <benchmark/benchmark.h>

#include "axtile/analysis.hpp"
#include "axtile/substitution.hpp"
#include "axtile/tileset.hpp"

using namespace axtile;

namespace {

const Tileset& chair() {
  static const Tileset ts = load_tileset(std::string(AXTILE_ASSET_DIR) + "/chair.tiles");
  return ts;
}

void BM_ExpandChair(benchmark::State& state) {
  const auto depth = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expand_tile(chair(), "L", depth));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (2 * depth)));
}
BENCHMARK(BM_ExpandChair)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_VisitChair(benchmark::State& state) {
  const auto depth = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    std::uint64_t sum = 0;
    visit_expansion(chair(), "L", depth, [&](const PlacedTile& pt) { sum += static_cast<std::uint64_t>(pt.placement.offset.x); });
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (2 * depth)));
}
BENCHMARK(BM_VisitChair)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_CoverStreaming(benchmark::State& state) {
  const auto depth = static_cast<unsigned>(state.range(0));
  const Polyomino& l = chair().tiles[0].shape;
  for (auto _ : state) {
    CoverAccumulator acc;
    visit_expansion(chair(), "L", depth, [&](const PlacedTile& pt) { acc.add(l, pt.placement); });
    benchmark::DoNotOptimize(acc.finish());
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (2 * depth)));
}
BENCHMARK(BM_CoverStreaming)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_CoverCheck(benchmark::State& state) {
  const Patch p = expand_tile(chair(), "L", static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cover_check(chair(), p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.placements.size()));
}
BENCHMARK(BM_CoverCheck)->DenseRange(6, 8, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
