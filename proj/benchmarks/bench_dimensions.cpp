#include <benchmark/benchmark.h>

#include "oneway/dimensions.hpp"
#include "oneway/generators.hpp"

using namespace oneway;

namespace {

void VcDimensionIP(benchmark::State& state) {
    const auto f = make_benchmark(BenchmarkKind::IP, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto res = vc_dimension(f);
        benchmark::DoNotOptimize(res.dimension);
    }
}
BENCHMARK(VcDimensionIP)->DenseRange(2, 4);

void VcDimensionGT(benchmark::State& state) {
    const auto f = make_benchmark(BenchmarkKind::GT, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto res = vc_dimension(f);
        benchmark::DoNotOptimize(res.dimension);
    }
}
BENCHMARK(VcDimensionGT)->DenseRange(2, 4);

void PseudoDimension(benchmark::State& state) {
    FunctionTable f(16, static_cast<int>(state.range(0)), 4, false);
    for (int x = 0; x < f.x_size; ++x)
        for (int y = 0; y < f.y_size; ++y) f.at(x, y) = (x * 7 + y * 3) % 4;
    for (auto _ : state) {
        auto res = pseudo_dimension(f, 0.1);
        benchmark::DoNotOptimize(res.dimension);
    }
}
BENCHMARK(PseudoDimension)->DenseRange(4, 12, 2);

} // namespace
