#include <benchmark/benchmark.h>

#include "gdht/random.hpp"
#include "gdht/snapshot.hpp"

using namespace gdht;

namespace {

void BM_BuildSnapshot(benchmark::State& state) {
    const auto a = static_cast<Algorithm>(state.range(1));
    const auto p = MetricParams::for_algorithm(a, 32);
    const NodeRing ring(random_population(static_cast<std::size_t>(state.range(0)), p, 5));
    for (auto _ : state) benchmark::DoNotOptimize(RoutingSnapshot::build(a, p, ring));
    state.SetLabel(std::string(to_string(a)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TruncatedSnapshot(benchmark::State& state) {
    const auto p = MetricParams::for_algorithm(Algorithm::Tapestry, 32);
    const NodeRing ring(random_population(500, p, 5));
    SnapshotOptions options;
    options.budgets.all = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(RoutingSnapshot::build(Algorithm::Tapestry, p, ring, options));
}

}  // namespace

BENCHMARK(BM_BuildSnapshot)
    ->ArgsProduct({{100, 1000}, {0, 1, 2, 3}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TruncatedSnapshot)->Arg(2)->Arg(4)->Arg(8)->Arg(15)->Unit(benchmark::kMillisecond);
