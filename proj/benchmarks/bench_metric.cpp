#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gdht/metric.hpp"
#include "gdht/random.hpp"

using namespace gdht;

namespace {

MetricParams params_from(const benchmark::State& state) {
    const auto width = static_cast<unsigned>(state.range(0));
    switch (state.range(1)) {
    case 0: return MetricParams::for_algorithm(Algorithm::Chord, width);
    case 1: return MetricParams::for_algorithm(Algorithm::Pastry, width);
    case 2: return MetricParams::for_algorithm(Algorithm::Tapestry, width);
    default: return MetricParams::for_algorithm(Algorithm::Kademlia, width);
    }
}

void BM_Distance(benchmark::State& state) {
    const auto p = params_from(state);
    std::mt19937_64 rng(1);
    std::vector<Identifier> ids;
    for (int i = 0; i < 1024; ++i) ids.push_back(random_identifier(rng, p));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(distance(ids[i & 1023], ids[(i * 7 + 3) & 1023], p));
        ++i;
    }
    state.SetLabel(std::string(to_string(p.variant())));
}

void BM_RootOracle(benchmark::State& state) {
    const auto p = MetricParams::for_algorithm(Algorithm::Tapestry, 160);
    const auto nodes = random_population(static_cast<std::size_t>(state.range(0)), p, 2);
    std::mt19937_64 rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(root_of_oracle(random_identifier(rng, p), nodes, p));
    state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_Distance)->ArgsProduct({{16, 64, 160}, {0, 1, 2, 3}});
BENCHMARK(BM_RootOracle)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oN);
