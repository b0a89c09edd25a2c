#include "oneway/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "oneway/errors.hpp"

namespace oneway {

// ---------------------------------------------------------------------------
// Greedy rejection sampling
// ---------------------------------------------------------------------------

namespace {

// Per-target acceleration: coverage(C) = sum_y min(p(y), C q(y)) restricted
// to support(q) equals prefix(p over ratios <= C) + C * suffix(q over
// ratios > C); C only grows, so a moving pointer makes the round update O(1).
struct SamplerPrep {
    std::vector<double> p, q;
    std::vector<double> ratio_sorted;
    std::vector<double> p_prefix; // p mass with ratio <= C, by pointer position
    std::vector<double> q_suffix; // q mass with ratio >  C

    SamplerPrep() = default;
    SamplerPrep(std::span<const double> target, std::span<const double> proposal) {
        p.assign(target.begin(), target.end());
        q.assign(proposal.begin(), proposal.end());
        std::vector<std::size_t> order;
        for (std::size_t y = 0; y < q.size(); ++y) {
            if (q[y] > 0.0) order.push_back(y);
            else if (p[y] > 0.0)
                throw validation_error(
                    "greedy_rejection_sample: target outcome " + std::to_string(y) +
                    " has zero proposal mass (support violation)");
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return p[a] / q[a] < p[b] / q[b];
        });
        const std::size_t n = order.size();
        ratio_sorted.resize(n);
        p_prefix.assign(n + 1, 0.0);
        q_suffix.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            ratio_sorted[i] = p[order[i]] / q[order[i]];
            p_prefix[i + 1] = p_prefix[i] + p[order[i]];
        }
        for (std::size_t i = n; i-- > 0;)
            q_suffix[i] = q_suffix[i + 1] + q[order[i]];
    }
};

GreedySample run_sampler(const SamplerPrep& prep, std::span<const double> proposal_cdf,
                         RandomStream& stream) {
    constexpr std::int64_t kRoundCap = 1'000'000'000;
    double coverage_c = 0.0;
    double slack = 1.0;
    std::size_t ptr = 0;
    for (std::int64_t round = 1; round <= kRoundCap; ++round) {
        const int y = static_cast<int>(stream.next_from_cdf(proposal_cdf));
        const double u = stream.next_unit();
        if (slack <= 1e-15) {
            // Coverage numerically complete; the reach probability of this
            // round is ~0. Terminate on any target-supported draw.
            if (prep.p[y] > 0.0) return {round, y};
            continue;
        }
        const double qy = prep.q[y];
        const double lo = std::min(prep.p[y], qy * coverage_c);
        const double hi = std::min(prep.p[y], qy * (coverage_c + slack));
        const double accept = (hi - lo) / (qy * slack);
        if (u < accept) return {round, y};
        coverage_c += slack;
        while (ptr < prep.ratio_sorted.size() && prep.ratio_sorted[ptr] <= coverage_c) ++ptr;
        slack = 1.0 - (prep.p_prefix[ptr] + coverage_c * prep.q_suffix[ptr]);
        if (slack < 0.0) slack = 0.0;
    }
    throw cap_error("greedy_rejection_sample: round cap exceeded");
}

} // namespace

GreedySample greedy_rejection_sample(std::span<const double> target,
                                     std::span<const double> proposal,
                                     RandomStream& stream) {
    if (target.size() != proposal.size())
        throw validation_error("greedy_rejection_sample: support sizes differ");
    SamplerPrep prep(target, proposal);
    const auto cdf = inclusive_prefix_sums(proposal);
    return run_sampler(prep, cdf, stream);
}

// ---------------------------------------------------------------------------
// Elias gamma
// ---------------------------------------------------------------------------

int elias_gamma_length(std::int64_t i) {
    if (i < 1)
        throw validation_error("elias_gamma: index must be >= 1");
    const int bits = 63 - std::countl_zero(static_cast<std::uint64_t>(i));
    return 2 * bits + 1;
}

std::string elias_gamma_encode(std::int64_t i) {
    const int len = elias_gamma_length(i);
    const int bits = (len - 1) / 2;
    std::string out(bits, '0');
    for (int b = bits; b >= 0; --b)
        out.push_back(((i >> b) & 1) ? '1' : '0');
    return out;
}

std::int64_t elias_gamma_decode(const std::string& bits) {
    std::size_t zeros = 0;
    while (zeros < bits.size() && bits[zeros] == '0') ++zeros;
    if (zeros == bits.size() || bits.size() != 2 * zeros + 1)
        throw validation_error("elias_gamma_decode: malformed code word");
    std::int64_t v = 0;
    for (std::size_t i = zeros; i < bits.size(); ++i)
        v = (v << 1) | (bits[i] == '1' ? 1 : 0);
    return v;
}

// ---------------------------------------------------------------------------
// Sample sizes
// ---------------------------------------------------------------------------

namespace {

void check_learning_args(int d, double eps, double delta, double c0, const char* op) {
    if (d < 0)
        throw validation_error(std::string(op) + ": dimension must be >= 0");
    if (!(eps > 0.0 && eps < 1.0))
        throw validation_error(std::string(op) + ": eps must be in (0,1)");
    if (!(delta > 0.0 && delta <= 1.0))
        throw validation_error(std::string(op) + ": delta must be in (0,1]");
    if (!(c0 >= 0.0))
        throw validation_error(std::string(op) + ": c0 must be >= 0");
}

} // namespace

std::int64_t sample_size_boolean(int d, double eps, double delta, double c0) {
    check_learning_args(d, eps, delta, c0, "sample_size_boolean");
    const double term = std::log2(1.0 / delta) / eps +
                        static_cast<double>(d) / eps * std::log2(1.0 / eps);
    return static_cast<std::int64_t>(std::ceil(std::max(0.0, c0 * term)));
}

std::int64_t sample_size_nonboolean(int d, double eps, double delta, double c0) {
    check_learning_args(d, eps, delta, c0, "sample_size_nonboolean");
    const double e4 = eps * eps * eps * eps;
    double term = std::log2(1.0 / delta) / e4;
    if (d > 0) {
        const double lg = std::log2(static_cast<double>(d) / eps);
        term += static_cast<double>(d) / e4 * lg * lg;
    }
    return static_cast<std::int64_t>(std::ceil(std::max(0.0, c0 * term)));
}

// ---------------------------------------------------------------------------
// Protocol runners
// ---------------------------------------------------------------------------

void ProtocolParams::validate() const {
    if (m < 0)
        throw validation_error("protocol: m must be >= 0");
    if (!(eps > 0.0 && eps < 0.5))
        throw validation_error("protocol: eps must be in (0, 1/2)");
    if (trials < 1)
        throw validation_error("protocol: trials must be >= 1");
    if (!(c0 > 0.0) || !(l_const >= 0.0))
        throw validation_error("protocol: c0 must be > 0 and l >= 0");
    if (threads < 1)
        throw validation_error("protocol: threads must be >= 1");
}

namespace {

struct TrialTotals {
    std::int64_t m1_bits = 0;
    std::int64_t max_m1 = 0;
    std::int64_t errors = 0;
    std::int64_t aborts = 0;

    void merge(const TrialTotals& o) {
        m1_bits += o.m1_bits;
        max_m1 = std::max(max_m1, o.max_m1);
        errors += o.errors;
        aborts += o.aborts;
    }
};

struct RunContext {
    const FunctionTable& f;
    const JointDistribution& mu;
    const ProtocolParams& params;
    bool nonboolean;
    double mi = 0.0;
    double abort_threshold = 0.0;
    std::vector<double> cell_cdf;     // over x*y_size + y
    std::vector<double> proposal;     // Y marginal
    std::vector<double> proposal_cdf;
    std::vector<SamplerPrep> preps;   // per x (positive-mass rows only)
    std::vector<char> has_prep;
    // Joint mode: product-space target/proposal per x, built on demand.
    std::int64_t joint_cells = 0;
    std::vector<double> joint_proposal;
    std::vector<double> joint_proposal_cdf;
};

RunContext make_context(const FunctionTable& f, const JointDistribution& mu,
                        const ProtocolParams& params, bool nonboolean) {
    f.validate();
    mu.validate();
    params.validate();
    if (f.x_size != mu.x_size || f.y_size != mu.y_size)
        throw validation_error("protocol: table and distribution shapes differ");
    if (!f.is_total())
        throw validation_error("protocol: table must be total");
    if (!nonboolean && !f.is_boolean())
        throw validation_error("protocol: boolean runner needs z_size == 2");

    RunContext ctx{f, mu, params, nonboolean, 0.0, 0.0, {}, {}, {}, {}, {}, 0, {}, {}};
    ctx.mi = mutual_information(mu);
    const double c = 4.0 * static_cast<double>(params.m) * ctx.mi + params.l_const;
    ctx.abort_threshold = 2.0 * c / params.eps;
    ctx.cell_cdf = inclusive_prefix_sums(mu.p);
    ctx.proposal = mu.y_marginal();
    ctx.proposal_cdf = inclusive_prefix_sums(ctx.proposal);
    ctx.preps.resize(f.x_size);
    ctx.has_prep.assign(f.x_size, 0);
    for (int x = 0; x < f.x_size; ++x) {
        if (mu.row_mass(x) <= 0.0) continue;
        ctx.preps[x] = SamplerPrep(mu.conditional_row(x), ctx.proposal);
        ctx.has_prep[x] = 1;
    }
    if (params.mode == SamplingMode::joint) {
        double cells = 1.0;
        for (std::int64_t i = 0; i < params.m; ++i) cells *= f.y_size;
        if (cells > static_cast<double>(params.joint_cell_cap))
            throw cap_error("protocol: joint mode needs y_size^m <= " +
                            std::to_string(params.joint_cell_cap));
        ctx.joint_cells = static_cast<std::int64_t>(cells);
        ctx.joint_proposal.resize(ctx.joint_cells);
        for (std::int64_t j = 0; j < ctx.joint_cells; ++j) {
            double prod = 1.0;
            std::int64_t rem = j;
            for (std::int64_t t = 0; t < params.m; ++t) {
                prod *= ctx.proposal[rem % f.y_size];
                rem /= f.y_size;
            }
            ctx.joint_proposal[j] = prod;
        }
        ctx.joint_proposal_cdf = inclusive_prefix_sums(ctx.joint_proposal);
    }
    return ctx;
}

std::vector<double> product_row(const RunContext& ctx, int x) {
    const auto row = ctx.mu.conditional_row(x);
    std::vector<double> out(ctx.joint_cells);
    for (std::int64_t j = 0; j < ctx.joint_cells; ++j) {
        double prod = 1.0;
        std::int64_t rem = j;
        for (std::int64_t t = 0; t < ctx.params.m; ++t) {
            prod *= row[rem % ctx.f.y_size];
            rem /= ctx.f.y_size;
        }
        out[j] = prod;
    }
    return out;
}

TrialTotals run_chunk(const RunContext& ctx, std::int64_t first, std::int64_t last) {
    TrialTotals totals;
    const auto& f = ctx.f;
    const std::int64_t m = ctx.params.m;
    std::vector<int> samples(m);
    std::vector<int> labels(m);
    std::unordered_map<int, SamplerPrep> joint_preps;

    for (std::int64_t trial = first; trial < last; ++trial) {
        RandomStream stream(substream_seed(ctx.params.seed, static_cast<std::uint64_t>(trial)));
        const std::size_t cell = stream.next_from_cdf(ctx.cell_cdf);
        const int x = static_cast<int>(cell) / f.y_size;
        const int y = static_cast<int>(cell) % f.y_size;

        std::int64_t m1 = 0;
        if (ctx.params.mode == SamplingMode::independent) {
            for (std::int64_t i = 0; i < m; ++i) {
                const auto s = run_sampler(ctx.preps[x], ctx.proposal_cdf, stream);
                samples[i] = s.value;
                m1 += elias_gamma_length(s.index);
            }
        } else if (m > 0) {
            auto it = joint_preps.find(x);
            if (it == joint_preps.end())
                it = joint_preps.emplace(x, SamplerPrep(product_row(ctx, x),
                                                        ctx.joint_proposal)).first;
            const auto s = run_sampler(it->second, ctx.joint_proposal_cdf, stream);
            m1 = elias_gamma_length(s.index);
            std::int64_t rem = s.value;
            for (std::int64_t t = 0; t < m; ++t) {
                samples[t] = static_cast<int>(rem % f.y_size);
                rem /= f.y_size;
            }
        }

        for (std::int64_t i = 0; i < m; ++i) labels[i] = f.at(x, samples[i]);

        int output;
        bool aborted = false;
        if (ctx.params.truncate && static_cast<double>(m1) > ctx.abort_threshold) {
            aborted = true;
            output = 0;
        } else if (!ctx.nonboolean) {
            // First row consistent with every labeled sample, in index order.
            int xh = 0;
            for (; xh < f.x_size; ++xh) {
                bool ok = true;
                for (std::int64_t i = 0; i < m && ok; ++i)
                    ok = f.at(xh, samples[i]) == labels[i];
                if (ok) break;
            }
            output = xh < f.x_size ? f.at(xh, y) : 0;
        } else {
            // Empirical L1 minimizer over scaled rows; integer distance sums
            // order identically to the scaled ones.
            int best_x = 0;
            std::int64_t best_dist = -1;
            for (int xh = 0; xh < f.x_size; ++xh) {
                std::int64_t dist = 0;
                for (std::int64_t i = 0; i < m; ++i)
                    dist += std::abs(f.at(xh, samples[i]) - labels[i]);
                if (best_dist < 0 || dist < best_dist) {
                    best_dist = dist;
                    best_x = xh;
                }
            }
            output = f.at(best_x, y);
        }

        totals.m1_bits += m1;
        totals.max_m1 = std::max(totals.max_m1, m1);
        totals.aborts += aborted ? 1 : 0;
        totals.errors += output != f.at(x, y) ? 1 : 0;
    }
    return totals;
}

TranscriptStats run_protocol(const FunctionTable& f, const JointDistribution& mu,
                             const ProtocolParams& params, bool nonboolean) {
    const RunContext ctx = make_context(f, mu, params, nonboolean);
    TrialTotals totals;
    if (params.threads <= 1) {
        totals = run_chunk(ctx, 0, params.trials);
    } else {
        const int workers = static_cast<int>(std::min<std::int64_t>(params.threads, params.trials));
        std::vector<TrialTotals> parts(workers);
        std::vector<std::thread> pool;
        const std::int64_t step = (params.trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::int64_t first = w * step;
            const std::int64_t last = std::min<std::int64_t>(params.trials, first + step);
            pool.emplace_back([&, w, first, last] { parts[w] = run_chunk(ctx, first, last); });
        }
        for (auto& th : pool) th.join();
        for (const auto& part : parts) totals.merge(part);
    }

    TranscriptStats stats;
    stats.trials = params.trials;
    stats.mean_m1_bits = static_cast<double>(totals.m1_bits) / static_cast<double>(params.trials);
    stats.max_m1_bits = totals.max_m1;
    if (nonboolean) {
        int width = 1;
        while ((1 << width) < f.z_size) ++width;
        stats.m2_bits = params.m * width;
    } else {
        stats.m2_bits = params.m;
    }
    stats.error_rate = static_cast<double>(totals.errors) / static_cast<double>(params.trials);
    stats.abort_rate = static_cast<double>(totals.aborts) / static_cast<double>(params.trials);
    stats.mi_bits = ctx.mi;
    return stats;
}

} // namespace

TranscriptStats run_boolean_protocol(const FunctionTable& f, const JointDistribution& mu,
                                     const ProtocolParams& params) {
    return run_protocol(f, mu, params, false);
}

TranscriptStats run_nonboolean_protocol(const FunctionTable& f, const JointDistribution& mu,
                                        const ProtocolParams& params) {
    return run_protocol(f, mu, params, true);
}

CalibrationResult calibrate_m(const FunctionTable& f, const JointDistribution& mu,
                              const ProtocolParams& base, double target_error,
                              bool nonboolean, std::int64_t max_m) {
    auto probe = [&](std::int64_t m) {
        ProtocolParams p = base;
        p.m = m;
        return run_protocol(f, mu, p, nonboolean);
    };
    {
        const auto s0 = probe(0);
        if (s0.error_rate <= target_error) return {0, s0};
    }
    std::int64_t lo = 0; // largest failing m seen
    std::int64_t hi = -1;
    TranscriptStats hi_stats;
    for (std::int64_t m = 1; m <= max_m; m *= 2) {
        const auto s = probe(m);
        if (s.error_rate <= target_error) {
            hi = m;
            hi_stats = s;
            break;
        }
        lo = m;
    }
    if (hi < 0)
        throw cap_error("calibrate_m: error target " + std::to_string(target_error) +
                        " not reached by m <= " + std::to_string(max_m));
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        const auto s = probe(mid);
        if (s.error_rate <= target_error) {
            hi = mid;
            hi_stats = s;
        } else {
            lo = mid;
        }
    }
    return {hi, hi_stats};
}

// ---------------------------------------------------------------------------
// Optimal one-way oracle
// ---------------------------------------------------------------------------

namespace {

// DFS over restricted growth strings with at most max_blocks labels.
// Incremental per-(block, column) best-response scores; prunes when even
// granting all unassigned mass cannot reach the error target.
struct PartitionSearch {
    const FunctionTable& f;
    const JointDistribution& mu;
    double eps;
    int max_blocks;

    std::vector<int> labels;
    std::vector<double> concrete;  // block * (y_size*z_size) + y*z_size + z
    std::vector<double> star;      // block * y_size + y
    std::vector<double> col_score; // block * y_size + y
    std::vector<double> block_score;
    std::vector<double> suffix_mass;
    double total_score = 0.0;
    bool found = false;

    PartitionSearch(const FunctionTable& fn, const JointDistribution& d, double e, int b)
        : f(fn), mu(d), eps(e), max_blocks(b), labels(fn.x_size, -1),
          concrete(static_cast<std::size_t>(b) * fn.y_size * fn.z_size, 0.0),
          star(static_cast<std::size_t>(b) * fn.y_size, 0.0),
          col_score(static_cast<std::size_t>(b) * fn.y_size, 0.0),
          block_score(b, 0.0), suffix_mass(fn.x_size + 1, 0.0) {
        for (int x = fn.x_size - 1; x >= 0; --x)
            suffix_mass[x] = suffix_mass[x + 1] + d.row_mass(x);
    }

    void add(int x, int b) {
        double delta = 0.0;
        for (int y = 0; y < f.y_size; ++y) {
            const double w = mu.at(x, y);
            const std::size_t cy = static_cast<std::size_t>(b) * f.y_size + y;
            const int v = f.at(x, y);
            double score;
            if (v == FunctionTable::kStar) {
                star[cy] += w;
                score = col_score[cy] + w;
            } else {
                const std::size_t cz =
                    (static_cast<std::size_t>(b) * f.y_size + y) * f.z_size + v;
                concrete[cz] += w;
                score = std::max(col_score[cy], concrete[cz] + star[cy]);
            }
            delta += score - col_score[cy];
            col_score[cy] = score;
        }
        block_score[b] += delta;
        total_score += delta;
        labels[x] = b;
    }

    void remove(int x, int b) {
        double delta = 0.0;
        for (int y = 0; y < f.y_size; ++y) {
            const double w = mu.at(x, y);
            const std::size_t cy = static_cast<std::size_t>(b) * f.y_size + y;
            const int v = f.at(x, y);
            if (v == FunctionTable::kStar) star[cy] -= w;
            else concrete[(static_cast<std::size_t>(b) * f.y_size + y) * f.z_size + v] -= w;
            double best = 0.0;
            const double* c = concrete.data() +
                              (static_cast<std::size_t>(b) * f.y_size + y) * f.z_size;
            for (int z = 0; z < f.z_size; ++z) best = std::max(best, c[z]);
            const double score = best + star[cy];
            delta += score - col_score[cy];
            col_score[cy] = score;
        }
        block_score[b] += delta;
        total_score += delta;
        labels[x] = -1;
    }

    bool dfs(int x, int used) {
        if (1.0 - (total_score + suffix_mass[x]) > eps + 1e-12) return false;
        if (x == f.x_size) {
            found = true;
            return true;
        }
        const int limit = std::min(used + 1, max_blocks);
        for (int b = 0; b < limit; ++b) {
            add(x, b);
            if (dfs(x + 1, std::max(used, b + 1))) return true;
            remove(x, b);
        }
        return false;
    }
};

} // namespace

OneWayOptimum optimal_oneway(const FunctionTable& f, const JointDistribution& mu,
                             double eps, const OneWayOptions& opts) {
    f.validate();
    mu.validate();
    if (f.x_size != mu.x_size || f.y_size != mu.y_size)
        throw validation_error("optimal_oneway: table and distribution shapes differ");
    if (!(eps >= 0.0 && eps < 1.0))
        throw validation_error("optimal_oneway: eps must be in [0,1)");
    if (f.x_size > opts.max_rows)
        throw cap_error("optimal_oneway: set-partition enumeration capped at x_size <= " +
                        std::to_string(opts.max_rows));

    for (int blocks = 1; blocks <= f.x_size; ++blocks) {
        PartitionSearch search(f, mu, eps, blocks);
        if (!search.dfs(0, 0)) continue;

        OneWayOptimum out;
        out.blocks = 0;
        for (int x = 0; x < f.x_size; ++x)
            out.blocks = std::max(out.blocks, search.labels[x] + 1);
        out.block_of_x = search.labels;
        out.bits = 0;
        while ((1 << out.bits) < out.blocks) ++out.bits;
        out.response.assign(static_cast<std::size_t>(out.blocks) * f.y_size, 0);
        double best_total = 0.0;
        for (int b = 0; b < out.blocks; ++b) {
            for (int y = 0; y < f.y_size; ++y) {
                const double* c = search.concrete.data() +
                                  (static_cast<std::size_t>(b) * f.y_size + y) * f.z_size;
                int best_z = 0;
                double best = c[0];
                for (int z = 1; z < f.z_size; ++z)
                    if (c[z] > best) { best = c[z]; best_z = z; }
                out.response[static_cast<std::size_t>(b) * f.y_size + y] = best_z;
                best_total += best + search.star[static_cast<std::size_t>(b) * f.y_size + y];
            }
        }
        out.error = 1.0 - best_total;
        return out;
    }
    throw cap_error("optimal_oneway: no partition reaches error <= " + std::to_string(eps) +
                    "; minimum achievable error is 0 at full discrimination, so eps < 0 "
                    "was requested");
}

} // namespace oneway
