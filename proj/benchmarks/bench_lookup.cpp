#include <random>

#include <benchmark/benchmark.h>

#include "gdht/lookup.hpp"
#include "gdht/random.hpp"

using namespace gdht;

namespace {

void BM_Lookup(benchmark::State& state) {
    const auto a = static_cast<Algorithm>(state.range(1));
    const auto p = MetricParams::for_algorithm(a, 32);
    const auto nodes = random_population(static_cast<std::size_t>(state.range(0)), p, 7);
    const auto snap = RoutingSnapshot::build(a, p, NodeRing(nodes));
    std::mt19937_64 rng(11);
    std::size_t hops = 0;
    for (auto _ : state) {
        const auto trace = lookup(snap, nodes[random_index(rng, nodes.size())], random_identifier(rng, p));
        hops += trace.hop_count();
        benchmark::DoNotOptimize(trace);
    }
    state.SetLabel(std::string(to_string(a)));
    state.counters["hops"] = benchmark::Counter(static_cast<double>(hops), benchmark::Counter::kAvgIterations);
}

void BM_ExhaustiveSweep(benchmark::State& state) {
    const auto a = static_cast<Algorithm>(state.range(0));
    const auto p = MetricParams::for_algorithm(a, 16);
    const auto snap = RoutingSnapshot::build(a, p, NodeRing(random_population(18, p, 1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_convergence(snap, {HashSelection::Mode::Exhaustive, 0, 1}, {}, 1));
    }
    state.SetLabel(std::string(to_string(a)));
    state.SetItemsProcessed(state.iterations() * 18 * 65536);
}

}  // namespace

BENCHMARK(BM_Lookup)->ArgsProduct({{100, 1000, 10000}, {0, 1, 2, 3}});
BENCHMARK(BM_ExhaustiveSweep)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
