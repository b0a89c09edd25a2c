#include <benchmark/benchmark.h>

#include "oneway/generators.hpp"
#include "oneway/rectangles.hpp"
#include "oneway/rng.hpp"

using namespace oneway;

namespace {

// Gray-code enumeration with incremental tallies vs. rebuilding every subset
// from scratch; the incremental walk is the module's key speedup.
double rec_naive_bits(const FunctionTable& f, const JointDistribution& mu, double eps) {
    double best_mass = -1.0;
    for (int mask = 1; mask < (1 << f.x_size); ++mask) {
        std::vector<int> rows;
        for (int x = 0; x < f.x_size; ++x)
            if (mask & (1 << x)) rows.push_back(x);
        double mass = 0.0;
        for (int x : rows) mass += mu.row_mass(x);
        if (!(mass > 0.0)) continue;
        const auto br = best_response(f, mu, rows);
        if (br.error <= eps + 1e-12) best_mass = std::max(best_mass, mass);
    }
    return -std::log2(best_mass);
}

FunctionTable bench_table(int rows) {
    RandomStream rng(7);
    FunctionTable f(rows, 8, 2, false);
    for (auto& v : f.values) v = rng.next_unit() < 0.5 ? 0 : 1;
    return f;
}

void RecExactGray(benchmark::State& state) {
    const int rows = static_cast<int>(state.range(0));
    const auto f = bench_table(rows);
    const auto d = JointDistribution::uniform(rows, 8);
    for (auto _ : state) {
        auto cert = rec_exact(f, d, 0.2);
        benchmark::DoNotOptimize(cert.value_bits);
    }
    state.SetComplexityN(1 << rows);
}
BENCHMARK(RecExactGray)->DenseRange(8, 18, 2)->Complexity();

void RecExactNaive(benchmark::State& state) {
    const int rows = static_cast<int>(state.range(0));
    const auto f = bench_table(rows);
    const auto d = JointDistribution::uniform(rows, 8);
    for (auto _ : state) {
        auto bits = rec_naive_bits(f, d, 0.2);
        benchmark::DoNotOptimize(bits);
    }
    state.SetComplexityN(1 << rows);
}
BENCHMARK(RecExactNaive)->DenseRange(8, 14, 2)->Complexity();

void RecGreedy(benchmark::State& state) {
    const int rows = static_cast<int>(state.range(0));
    const auto f = bench_table(rows);
    const auto d = JointDistribution::uniform(rows, 8);
    for (auto _ : state) {
        auto cert = rec_greedy(f, d, 0.2);
        benchmark::DoNotOptimize(cert.value_bits);
    }
}
BENCHMARK(RecGreedy)->RangeMultiplier(2)->Range(16, 256);

} // namespace
