#include "cobp/examples/game_of_life.hpp"
#include "cobp/examples/hot_cold.hpp"
#include "cobp/examples/registry.hpp"

#include <benchmark/benchmark.h>

using namespace cobp;
using namespace cobp::examples;

namespace {

std::vector<Cell> square_seed(int n) {
  std::vector<Cell> cells;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if ((r * 7 + c * 3) % 5 < 2) cells.push_back({r, c});
    }
  }
  return cells;
}

void BM_LifeRun(benchmark::State& state) {
  const auto ex = build_game_of_life(square_seed(static_cast<int>(state.range(0))), {.generations = 4});
  const Engine engine(ex.runnable());
  for (auto _ : state) {
    EngineState st = engine.initialize(ex.ctx_init, 1);
    benchmark::DoNotOptimize(engine.run(st, 1'000'000));
  }
}
BENCHMARK(BM_LifeRun)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_HotColdVerify(benchmark::State& state) {
  const auto ex = make_example("ext-hot-cold");
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_states(*ex.program, ex.ctx_init, ex.env_model));
  }
}
BENCHMARK(BM_HotColdVerify)->Unit(benchmark::kMillisecond);

void BM_QueryDiff(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto ex = build_game_of_life(square_seed(n));
  auto after_cells = square_seed(n);
  after_cells.erase(after_cells.begin(), after_cells.begin() + static_cast<long>(after_cells.size() / 4));
  const ContextStore before = life_context(square_seed(n), 1);
  const ContextStore after = life_context(after_cells, 1);
  const auto bindings = ex.program->bindings();
  for (auto _ : state) {
    benchmark::DoNotOptimize(diff_queries(before, after, ex.program->repo, bindings));
  }
}
BENCHMARK(BM_QueryDiff)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
