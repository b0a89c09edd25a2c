#include "oneway/generators.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "oneway/errors.hpp"

namespace oneway {

BenchmarkKind benchmark_kind_from_string(const std::string& s) {
    if (s == "gt" || s == "GT") return BenchmarkKind::GT;
    if (s == "ip" || s == "IP") return BenchmarkKind::IP;
    if (s == "disj" || s == "DISJ") return BenchmarkKind::DISJ;
    throw validation_error("unknown benchmark kind '" + s + "' (expected gt, ip or disj)");
}

FunctionTable make_benchmark(BenchmarkKind kind, int n, const GeneratorLimits& limits) {
    if (n < 1 || n > limits.max_bits)
        throw validation_error("benchmark bit width n = " + std::to_string(n) +
                               " out of range [1," + std::to_string(limits.max_bits) + "]");
    const int size = 1 << n;
    FunctionTable f(size, size, 2, false);
    for (int x = 0; x < size; ++x) {
        for (int y = 0; y < size; ++y) {
            int v = 0;
            switch (kind) {
            case BenchmarkKind::GT: v = x > y ? 1 : 0; break;
            case BenchmarkKind::IP: v = std::popcount(static_cast<unsigned>(x & y)) & 1; break;
            case BenchmarkKind::DISJ: v = (x & y) == 0 ? 1 : 0; break;
            }
            f.at(x, y) = v;
        }
    }
    return f;
}

std::int64_t matching_count(int n) {
    std::int64_t c = 1;
    for (int i = 2 * n - 1; i >= 1; i -= 2) c *= i;
    return c;
}

std::vector<std::pair<int, int>> matching_from_index(int n, std::int64_t index) {
    const int v = 2 * n;
    std::vector<bool> used(v, false);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n);
    for (int t = 0; t < n; ++t) {
        int lo = 0;
        while (used[lo]) ++lo;
        used[lo] = true;
        const int radix = v - 2 * t - 1; // unmatched vertices above lo
        const int digit = static_cast<int>(index % radix);
        index /= radix;
        int seen = -1, hi = lo;
        while (seen < digit) {
            ++hi;
            if (!used[hi]) ++seen;
        }
        used[hi] = true;
        edges.emplace_back(lo, hi);
    }
    return edges;
}

int apply_matching(const std::vector<std::pair<int, int>>& matching, int n, int x) {
    int out = 0;
    for (std::size_t t = 0; t < matching.size(); ++t) {
        const int bi = (x >> (matching[t].first % n)) & 1;
        const int bj = (x >> (matching[t].second % n)) & 1;
        out |= (bi ^ bj) << t;
    }
    return out;
}

namespace {

std::int64_t hamming_ball_volume(int n, int radius) {
    std::int64_t total = 0, c = 1;
    for (int i = 0; i <= radius; ++i) {
        total += c;
        c = c * (n - i) / (i + 1);
    }
    return total;
}

} // namespace

NpmInstance make_npm(int n, const GeneratorLimits& limits) {
    if (n < 2)
        throw validation_error("NPM requires n >= 2 (got " + std::to_string(n) + ")");
    const std::int64_t m_count = matching_count(n);
    const std::int64_t y_size = m_count << n;
    if (y_size > limits.max_npm_y)
        throw cap_error("NPM size limit exceeded: y_size = (2n-1)!! * 2^n = " +
                        std::to_string(y_size) + " > " + std::to_string(limits.max_npm_y));

    const int x_size = 1 << n;
    const int radius = n / 3;
    NpmInstance inst;
    inst.n = n;
    inst.radius = radius;
    inst.matchings = m_count;
    inst.table = FunctionTable(x_size, static_cast<int>(y_size), 2, false);
    inst.dist = JointDistribution(x_size, static_cast<int>(y_size));

    const double ball = static_cast<double>(hamming_ball_volume(n, radius));
    const double cell_weight = 0.5 / (static_cast<double>(x_size) *
                                      static_cast<double>(m_count) * ball);

    for (std::int64_t mi = 0; mi < m_count; ++mi) {
        const auto matching = matching_from_index(n, mi);
        for (int x = 0; x < x_size; ++x) {
            const int mx = apply_matching(matching, n, x);
            const int mx_flip = mx ^ (x_size - 1);
            for (int w = 0; w < x_size; ++w) {
                const int y = static_cast<int>((mi << n) | w);
                const int d0 = std::popcount(static_cast<unsigned>(mx ^ w));
                const int d1 = std::popcount(static_cast<unsigned>(mx_flip ^ w));
                int value = 0;
                if (d0 <= radius) value = 0;
                else if (d1 <= radius) value = 1;
                inst.table.at(x, y) = value;
                double mass = 0.0;
                if (d0 <= radius) mass += cell_weight;
                if (d1 <= radius) mass += cell_weight;
                inst.dist.at(x, y) = mass;
            }
        }
    }
    return inst;
}

} // namespace oneway
