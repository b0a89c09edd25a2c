#include "oneway/extractors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "oneway/errors.hpp"
#include "oneway/info.hpp"
#include "oneway/joint_distribution.hpp"
#include "oneway/rng.hpp"

namespace oneway {

namespace {

int exact_log2(int v, const char* what) {
    if (v < 1 || (v & (v - 1)) != 0)
        throw validation_error(std::string(what) + ": size " + std::to_string(v) +
                               " is not a power of two");
    return std::countr_zero(static_cast<unsigned>(v));
}

void check_extractor_table(const FunctionTable& h) {
    h.validate();
    if (!h.is_boolean() || !h.is_total())
        throw validation_error("extractor: table must be total boolean");
    exact_log2(h.x_size, "extractor x_size");
    exact_log2(h.y_size, "extractor y_size");
}

// Signed column entries a(x,y) = 2 h(x,y) - 1.
std::vector<int> signed_entries(const FunctionTable& h) {
    std::vector<int> a(static_cast<std::size_t>(h.x_size) * h.y_size);
    for (int x = 0; x < h.x_size; ++x)
        for (int y = 0; y < h.y_size; ++y)
            a[static_cast<std::size_t>(x) * h.y_size + y] = 2 * h.at(x, y) - 1;
    return a;
}

// Take the 2^k rows with top scores (ties toward smaller index) and return
// (sum of their scores, the set). Integer scores keep ties exact.
std::pair<std::int64_t, std::vector<int>> top_rows(const std::vector<std::int64_t>& score,
                                                   int take) {
    std::vector<int> order(score.size());
    std::iota(order.begin(), order.end(), 0);
    std::nth_element(order.begin(), order.begin() + take, order.end(), [&](int a, int b) {
        if (score[a] != score[b]) return score[a] > score[b];
        return a < b;
    });
    std::vector<int> set(order.begin(), order.begin() + take);
    std::sort(set.begin(), set.end());
    std::int64_t sum = 0;
    for (int x : set) sum += score[x];
    return {sum, std::move(set)};
}

} // namespace

double flat_source_bias(const FunctionTable& h, std::span<const int> rows) {
    check_extractor_table(h);
    if (rows.empty())
        throw validation_error("flat_source_bias: empty source set");
    std::vector<std::int64_t> ones(h.y_size, 0);
    for (int x : rows) {
        if (x < 0 || x >= h.x_size)
            throw validation_error("flat_source_bias: row out of range");
        for (int y = 0; y < h.y_size; ++y) ones[y] += h.at(x, y);
    }
    double sum = 0.0;
    const double inv = 1.0 / static_cast<double>(rows.size());
    for (int y = 0; y < h.y_size; ++y)
        sum += std::abs(2.0 * static_cast<double>(ones[y]) * inv - 1.0);
    return sum / static_cast<double>(h.y_size);
}

ExtractorAudit worst_flat_source(const FunctionTable& h, int k,
                                 const ExtractorOptions& opts) {
    check_extractor_table(h);
    const int n = exact_log2(h.x_size, "extractor x_size");
    const int m = exact_log2(h.y_size, "extractor y_size");
    if (k < 0 || k > n)
        throw validation_error("worst_flat_source: k must be an integer in [0, n]");
    const int take = 1 << k;
    const auto a = signed_entries(h);

    ExtractorAudit audit;
    audit.n = n;
    audit.m = m;
    audit.k = k;

    if (m > opts.max_seed_bits_exact) {
        if (!opts.allow_greedy)
            throw cap_error("worst_flat_source: exact sign-pattern search capped at m <= " +
                            std::to_string(opts.max_seed_bits_exact) +
                            " seed bits; pass --greedy for a lower bound");
        // Coordinate ascent on the sign pattern from random starts; reports a
        // lower bound on the worst bias.
        audit.exact = false;
        RandomStream rng(opts.greedy_seed);
        std::int64_t best_sum = -1;
        std::vector<int> best_set;
        for (int restart = 0; restart < opts.greedy_restarts; ++restart) {
            std::vector<int> sigma(h.y_size);
            for (int y = 0; y < h.y_size; ++y) sigma[y] = rng.next_unit() < 0.5 ? -1 : 1;
            std::vector<std::int64_t> score(h.x_size, 0);
            for (int x = 0; x < h.x_size; ++x)
                for (int y = 0; y < h.y_size; ++y)
                    score[x] += sigma[y] * a[static_cast<std::size_t>(x) * h.y_size + y];
            std::int64_t cur = top_rows(score, take).first;
            bool improved = true;
            while (improved) {
                improved = false;
                for (int y = 0; y < h.y_size; ++y) {
                    for (int x = 0; x < h.x_size; ++x)
                        score[x] -= 2 * sigma[y] * a[static_cast<std::size_t>(x) * h.y_size + y];
                    sigma[y] = -sigma[y];
                    const std::int64_t cand = top_rows(score, take).first;
                    if (cand > cur) {
                        cur = cand;
                        improved = true;
                    } else {
                        for (int x = 0; x < h.x_size; ++x)
                            score[x] -= 2 * sigma[y] *
                                        a[static_cast<std::size_t>(x) * h.y_size + y];
                        sigma[y] = -sigma[y];
                    }
                }
            }
            auto [sum, set] = top_rows(score, take);
            if (sum > best_sum ||
                (sum == best_sum && std::lexicographical_compare(set.begin(), set.end(),
                                                                 best_set.begin(),
                                                                 best_set.end()))) {
                best_sum = sum;
                best_set = std::move(set);
            }
        }
        audit.worst_set = std::move(best_set);
        audit.bias = flat_source_bias(h, audit.worst_set);
        return audit;
    }

    // Exact: Gray-code walk over all 2^(2^m) sign patterns, keeping the row
    // scores updated incrementally.
    std::vector<std::int64_t> score(h.x_size, 0);
    for (int x = 0; x < h.x_size; ++x)
        for (int y = 0; y < h.y_size; ++y)
            score[x] -= a[static_cast<std::size_t>(x) * h.y_size + y]; // sigma = all -1
    std::int64_t best_sum;
    std::vector<int> best_set;
    std::tie(best_sum, best_set) = top_rows(score, take);

    const std::uint64_t patterns = std::uint64_t{1} << h.y_size;
    std::uint64_t gray = 0;
    for (std::uint64_t i = 1; i < patterns; ++i) {
        const int y = std::countr_zero(i);
        const std::uint64_t bit = std::uint64_t{1} << y;
        gray ^= bit;
        const int sign = (gray & bit) ? 1 : -1; // flipped to sign*1
        for (int x = 0; x < h.x_size; ++x)
            score[x] += 2 * sign * a[static_cast<std::size_t>(x) * h.y_size + y];
        auto [sum, set] = top_rows(score, take);
        if (sum > best_sum ||
            (sum == best_sum && std::lexicographical_compare(set.begin(), set.end(),
                                                             best_set.begin(),
                                                             best_set.end()))) {
            best_sum = sum;
            best_set = std::move(set);
        }
    }
    audit.worst_set = std::move(best_set);
    audit.bias = static_cast<double>(best_sum) /
                 (static_cast<double>(take) * static_cast<double>(h.y_size));
    return audit;
}

std::optional<int> extractor_threshold(const FunctionTable& h, double eps,
                                       const ExtractorOptions& opts) {
    check_extractor_table(h);
    if (!(eps > 0.0 && eps < 0.5))
        throw validation_error("extractor_threshold: eps must be in (0, 1/2)");
    const int n = exact_log2(h.x_size, "extractor x_size");
    for (int k = 0; k <= n; ++k) {
        const auto audit = worst_flat_source(h, k, opts);
        if (audit.bias < 2.0 * eps) return k;
    }
    return std::nullopt;
}

LargeRecReport largerec_check(const FunctionTable& h, double eps,
                              const ExtractorOptions& opts) {
    check_extractor_table(h);
    if (!(eps > 0.0 && eps < 0.5))
        throw validation_error("largerec_check: eps must be in (0, 1/2)");
    const int n = exact_log2(h.x_size, "extractor x_size");
    if (n > 4)
        throw cap_error("largerec_check: exact rectangle bound capped at n <= 4");
    const auto uniform = JointDistribution::uniform(h.x_size, h.y_size);
    LargeRecReport report;
    for (int k = 0; k <= n; ++k) {
        LargeRecRow row;
        row.k = k;
        const auto audit = worst_flat_source(h, k, opts);
        row.bias = audit.bias;
        row.is_strong = audit.bias < 2.0 * eps;
        if (row.is_strong) {
            const auto cert = rec_exact(h, uniform, 0.5 - eps);
            row.rec_bits = cert.value_bits;
            row.margin = row.rec_bits - static_cast<double>(n - k);
            row.holds = row.rec_bits > static_cast<double>(n - k);
            report.qualifying += 1;
            report.all_hold = report.all_hold && row.holds;
        }
        report.rows.push_back(row);
    }
    return report;
}

double side_info_a(double eps) {
    const double half_gap = 0.5 - eps;
    return 0.25 * half_gap * half_gap * half_gap;
}

double side_info_b(double eps) {
    return eps * (binary_entropy(0.25 - eps / 2.0) - binary_entropy(0.125 - eps / 4.0));
}

SideInfoResult side_info_experiment(const FunctionTable& h, double eps,
                                    std::span<const int> leak,
                                    const ExtractorOptions& opts) {
    check_extractor_table(h);
    if (!(eps > 0.0 && eps < 0.5))
        throw validation_error("side_info_experiment: eps must be in (0, 1/2)");
    if (static_cast<int>(leak.size()) != h.x_size)
        throw validation_error("side_info_experiment: leak must assign one label per row");
    const auto threshold = extractor_threshold(h, eps, opts);
    if (!threshold)
        throw cap_error("side_info_experiment: h is not a strong (k," + std::to_string(eps) +
                        ")-extractor for any k <= n");

    SideInfoResult out;
    out.k = *threshold;
    out.a_eps = side_info_a(eps);
    out.b_eps = side_info_b(eps);

    // Group rows by leak label; X uniform makes X | M=label uniform on the
    // preimage, so the conditional bias is a flat-source bias.
    std::map<int, std::vector<int>> groups;
    for (int x = 0; x < h.x_size; ++x) groups[leak[x]].push_back(x);

    std::vector<double> label_probs;
    out.dist = 0.0;
    for (const auto& [label, rows] : groups) {
        const double pr = static_cast<double>(rows.size()) / static_cast<double>(h.x_size);
        label_probs.push_back(pr);
        out.dist += pr * flat_source_bias(h, rows);
    }
    out.mi_bits = entropy(std::span<const double>(label_probs));

    const int n = exact_log2(h.x_size, "extractor x_size");
    const double rhs = out.b_eps * static_cast<double>(n - out.k);
    out.implication_ok = !(out.dist > 1.0 - out.a_eps) || out.mi_bits > rhs;
    return out;
}

} // namespace oneway
