#include <benchmark/benchmark.h>

#include <random>

#include "hybridize/graphs/call_graph.h"
#include "hybridize/transform/edits.h"
#include "oracles.h"
#include "testing.h"

namespace {

using namespace hybridize;

void BM_AnalyzeCorpus(benchmark::State& state) {
  auto files = testing::synthetic_corpus(static_cast<std::size_t>(state.range(0)), 1);
  std::size_t lines = 0;
  for (const auto& [path, text] : files) lines += static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  for (auto _ : state) {
    auto a = testing::analyze_sources(files);
    benchmark::DoNotOptimize(a->script.edits.size());
  }
  state.counters["lines"] = static_cast<double>(lines);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * lines));
}
BENCHMARK(BM_AnalyzeCorpus)->Arg(500)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_RenderDiff(benchmark::State& state) {
  auto a = testing::analyze_sources(testing::synthetic_corpus(static_cast<std::size_t>(state.range(0)), 2));
  for (auto _ : state) benchmark::DoNotOptimize(transform::render_diff(a->script, a->project));
}
BENCHMARK(BM_RenderDiff)->Arg(2000)->Arg(8000)->Unit(benchmark::kMicrosecond);

void BM_IsRecursive(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
  std::vector<std::pair<int, int>> edges;
  for (std::size_t e = 0; e < 3 * n; ++e) edges.emplace_back(pick(rng), pick(rng));
  graphs::CallGraph cg = graphs::CallGraph::from_edges(n, edges);
  for (auto _ : state) {
    std::size_t cyclic = 0;
    for (std::size_t v = 0; v < n; ++v) cyclic += graphs::is_recursive(cg, static_cast<int>(v)) ? 1 : 0;
    benchmark::DoNotOptimize(cyclic);
  }
}
BENCHMARK(BM_IsRecursive)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
