#include <benchmark/benchmark.h>

#include "oneway/extractors.hpp"
#include "oneway/generators.hpp"
#include "oneway/rng.hpp"

using namespace oneway;

namespace {

void WorstFlatSource(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int m = static_cast<int>(state.range(1));
    RandomStream rng(3);
    FunctionTable h(1 << n, 1 << m, 2, false);
    for (auto& v : h.values) v = rng.next_unit() < 0.5 ? 0 : 1;
    for (auto _ : state) {
        auto audit = worst_flat_source(h, n / 2);
        benchmark::DoNotOptimize(audit.bias);
    }
}
BENCHMARK(WorstFlatSource)
    ->ArgsProduct({benchmark::CreateDenseRange(3, 6, 1), {2, 3, 4}});

} // namespace
