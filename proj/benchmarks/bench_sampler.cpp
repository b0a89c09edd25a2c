#include <benchmark/benchmark.h>

#include "oneway/generators.hpp"
#include "oneway/protocols.hpp"
#include "oneway/rng.hpp"

using namespace oneway;

namespace {

void GreedyRejectionSampler(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    RandomStream gen(11);
    std::vector<double> p(n), q(n);
    double tp = 0.0, tq = 0.0;
    for (auto& v : p) tp += v = gen.next_unit();
    for (auto& v : q) tq += v = 0.05 + gen.next_unit();
    for (auto& v : p) v /= tp;
    for (auto& v : q) v /= tq;
    RandomStream rng(1234);
    for (auto _ : state) {
        auto s = greedy_rejection_sample(p, q, rng);
        benchmark::DoNotOptimize(s.index);
    }
}
BENCHMARK(GreedyRejectionSampler)->RangeMultiplier(4)->Range(4, 1024);

void BooleanProtocolTrial(benchmark::State& state) {
    const auto f = make_benchmark(BenchmarkKind::GT, 6);
    JointDistribution d(64, 64);
    for (int x = 0; x < 64; ++x)
        for (int y = 0; y < 64; ++y)
            d.at(x, y) = (0.5 * (x == y ? 1.0 : 0.0) + 0.5 / 64.0) / 64.0;
    ProtocolParams params;
    params.eps = 0.2;
    params.m = static_cast<int>(state.range(0));
    params.trials = 100;
    params.seed = 5;
    for (auto _ : state) {
        auto stats = run_boolean_protocol(f, d, params);
        benchmark::DoNotOptimize(stats.error_rate);
    }
}
BENCHMARK(BooleanProtocolTrial)->RangeMultiplier(2)->Range(2, 32);

} // namespace
