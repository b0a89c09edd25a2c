#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "oneway/function_table.hpp"
#include "oneway/rectangles.hpp"

namespace oneway {

// Strong-extractor auditing for boolean h : {0,1}^n x {0,1}^m -> {0,1}
// (tables with power-of-two sizes). Bias of a source uniform on S is the
// L1 distance || h(X,Y)Y - U (x) Y ||_1 = 2^-m * sum_y |2 p_y(S) - 1| with
// p_y(S) the fraction of S mapping to 1 in column y.

struct ExtractorAudit {
    int n = 0;               // input bits
    int m = 0;               // seed bits
    int k = 0;               // min-entropy parameter
    std::vector<int> worst_set; // flat source of size 2^k maximizing the bias
    double bias = 0.0;
    bool exact = true;       // false when the greedy fallback produced a lower bound
};

struct ExtractorOptions {
    int max_seed_bits_exact = 4; // sign patterns are 2^(2^m); beyond, greedy
    bool allow_greedy = false;
    int greedy_restarts = 32;
    std::uint64_t greedy_seed = 1;
};

/// Bias of the flat source uniform on S (subset of X given by row indices).
double flat_source_bias(const FunctionTable& h, std::span<const int> rows);

/// Exact worst flat source of size 2^k: for every sign pattern over the
/// columns, score rows by the signed column sums and keep the top 2^k; the
/// maximum over patterns is exact because the bias is the max of these
/// linear functionals and flat sources are the extreme points of the
/// min-entropy-k polytope. Deterministic lexicographic tie-break on the set.
ExtractorAudit worst_flat_source(const FunctionTable& h, int k,
                                 const ExtractorOptions& opts = {});

/// Smallest k whose worst flat-source bias is < 2*eps (strict), or nullopt
/// when even k = n fails.
std::optional<int> extractor_threshold(const FunctionTable& h, double eps,
                                       const ExtractorOptions& opts = {});

struct LargeRecRow {
    int k = 0;
    double bias = 0.0;
    bool is_strong = false;
    double rec_bits = 0.0;   // rec at error 1/2 - eps, uniform product source
    double margin = 0.0;     // rec_bits - (n - k)
    bool holds = true;       // strict rec > n - k (vacuous when not strong)
};

struct LargeRecReport {
    std::vector<LargeRecRow> rows; // one per k = 0..n
    bool all_hold = true;
    int qualifying = 0;            // number of strong k values checked
};

/// For every k where h is a strong (k,eps)-extractor under the exact audit,
/// checks rec_exact(h, uniform, 1/2 - eps) > n - k strictly.
LargeRecReport largerec_check(const FunctionTable& h, double eps,
                              const ExtractorOptions& opts = {});

struct SideInfoResult {
    double mi_bits = 0.0;      // I(X : M) of the classical leak
    double dist = 0.0;         // || h(X,Y)YM - U (x) YM ||_1, exact
    double a_eps = 0.0;        // (1/4)(1/2 - eps)^3
    double b_eps = 0.0;        // eps (S(1/4 - eps/2) - S(1/8 - eps/4))
    int k = 0;                 // extractor threshold used
    bool implication_ok = true; // dist > 1 - a  implies  mi > b (n - k)
};

double side_info_a(double eps);
double side_info_b(double eps);

/// Exact both-sides evaluation of the leakage implication for a classical
/// side channel M = leak(X) (one label per row), X and Y uniform and
/// independent. Throws when h has no extractor threshold at eps.
SideInfoResult side_info_experiment(const FunctionTable& h, double eps,
                                    std::span<const int> leak,
                                    const ExtractorOptions& opts = {});

} // namespace oneway
