#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oneway/function_table.hpp"
#include "oneway/info.hpp"
#include "oneway/joint_distribution.hpp"
#include "oneway/rng.hpp"

namespace oneway {

// ---------------------------------------------------------------------------
// Correlation sampling: greedy rejection sampling against a shared stream of
// proposal draws. Alice (who knows the target) finds the first accepted
// round; the round index is the message, and both sides recover the sample
// from the shared stream.
// ---------------------------------------------------------------------------

struct GreedySample {
    std::int64_t index = 0; // accepted round, 1-based
    int value = 0;          // sampled outcome
};

/// Exact sampler: Pr[value = y] = target(y). Round i with state (C, s) draws
/// y ~ proposal from the stream and accepts with probability
/// [min(p(y), q(y)(C+s)) - min(p(y), q(y)C)] / (q(y) s), then updates
/// C <- C+s, s <- 1 - sum_y min(p(y), q(y)C); initially C = 0, s = 1.
/// Requires support(target) within support(proposal).
GreedySample greedy_rejection_sample(std::span<const double> target,
                                     std::span<const double> proposal,
                                     RandomStream& stream);

/// Elias gamma code for i >= 1: floor(log2 i) zeros, then the binary digits
/// of i. Length 2*floor(log2 i) + 1; prefix-free.
int elias_gamma_length(std::int64_t i);
std::string elias_gamma_encode(std::int64_t i);           // "0"/"1" text bits
std::int64_t elias_gamma_decode(const std::string& bits); // whole-string decode

// ---------------------------------------------------------------------------
// Sample-size formulas for the learners.
// ---------------------------------------------------------------------------

/// ceil(c0 * ((1/eps) log2(1/delta) + (d/eps) log2(1/eps))) for the
/// consistent-hypothesis boolean learner.
std::int64_t sample_size_boolean(int d, double eps, double delta, double c0);

/// ceil(c0 * ((1/eps^4) log2(1/delta) + (d/eps^4) log2^2(d/eps))) for the
/// L1 learner on [0,1]-valued rows.
std::int64_t sample_size_nonboolean(int d, double eps, double delta, double c0);

// ---------------------------------------------------------------------------
// Protocol runners.
// ---------------------------------------------------------------------------

enum class SamplingMode { independent, joint };

struct ProtocolParams {
    std::int64_t m = 1;        // samples per trial (0 allowed: empty sample)
    double c0 = 1.0;           // learning-constant stand-in
    double l_const = 16.0;     // per-call overhead stand-in
    double eps = 0.1;          // target error, in (0, 1/2)
    bool truncate = false;     // abort + output 0 when |M1| > 2c/eps
    SamplingMode mode = SamplingMode::independent;
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    int threads = 1;
    std::int64_t joint_cell_cap = 1'000'000; // y_size^m cap for joint mode

    void validate() const;
};

struct TranscriptStats {
    std::int64_t trials = 0;
    double mean_m1_bits = 0.0;
    std::int64_t max_m1_bits = 0;
    std::int64_t m2_bits = 0; // per trial, fixed by (m, k)
    double error_rate = 0.0;
    double abort_rate = 0.0;
    double mi_bits = 0.0;     // exact I(X:Y) of the input distribution
};

/// One-way boolean protocol: per trial, draw (x,y) ~ mu, generate m samples
/// from mu_x through the correlation sampler (proposal = Y marginal of mu),
/// send their accepted indices (M1, gamma-coded) plus the m bits f(x, y_i)
/// (M2); Bob answers f(x', y) for the first row consistent with M2. With
/// truncate, trials whose |M1| exceeds 2(4m I(X:Y) + l)/eps abort to output 0.
TranscriptStats run_boolean_protocol(const FunctionTable& f, const JointDistribution& mu,
                                     const ProtocolParams& params);

/// Non-boolean variant: M2 carries m fixed-width ceil(log2 k)-bit values and
/// Bob answers with the row minimizing the empirical L1 distance to the
/// received scaled values (ties to the smallest row index).
TranscriptStats run_nonboolean_protocol(const FunctionTable& f, const JointDistribution& mu,
                                        const ProtocolParams& params);

struct CalibrationResult {
    std::int64_t m = 0;
    TranscriptStats stats; // stats of the accepted m
};

/// Smallest m whose empirical error meets the target: doubling scan then
/// binary refinement, all runs at the given trial count and seed.
CalibrationResult calibrate_m(const FunctionTable& f, const JointDistribution& mu,
                              const ProtocolParams& base, double target_error,
                              bool nonboolean, std::int64_t max_m = 1 << 20);

// ---------------------------------------------------------------------------
// Brute-force oracle for optimal deterministic one-way distributional
// complexity.
// ---------------------------------------------------------------------------

struct OneWayOptimum {
    int bits = 0;                    // ceil(log2 of the block count)
    int blocks = 0;
    std::vector<int> block_of_x;     // partition witness, labels 0..blocks-1
    std::vector<int> response;       // blocks x y_size, row-major: Bob's output
    double error = 0.0;              // achieved error of the witness
};

struct OneWayOptions {
    int max_rows = 12; // set-partition enumeration cap
};

/// Minimum ceil(log2 B) over partitions of X into B blocks whose per-block
/// majority response errs with probability <= eps (undefined cells count as
/// correct). Exhaustive over set partitions in restricted-growth order.
OneWayOptimum optimal_oneway(const FunctionTable& f, const JointDistribution& mu,
                             double eps, const OneWayOptions& opts = {});

} // namespace oneway
