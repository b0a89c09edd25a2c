#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oneway/function_table.hpp"
#include "oneway/joint_distribution.hpp"

namespace oneway {

enum class BenchmarkKind { GT, IP, DISJ };

BenchmarkKind benchmark_kind_from_string(const std::string& s);

struct GeneratorLimits {
    int max_bits = 12;            // GT/IP/DISJ tables are 2^n x 2^n
    std::int64_t max_npm_y = 1'000'000;
};

/// GT(x,y) = [x > y], IP(x,y) = <x,y> mod 2, DISJ(x,y) = [x AND y == 0],
/// on n-bit inputs; all total boolean tables of size 2^n x 2^n.
FunctionTable make_benchmark(BenchmarkKind kind, int n,
                             const GeneratorLimits& limits = {});

/// Perfect matchings on [2n] in canonical order: the smallest unmatched
/// vertex is paired with each larger unmatched vertex, recursively. The
/// index <-> matching map is a mixed-radix bijection with digits
/// (2n-1), (2n-3), ..., 1.
std::int64_t matching_count(int n);                       // (2n-1)!!
std::vector<std::pair<int, int>> matching_from_index(int n, std::int64_t index);

/// Apply a matching to x in {0,1}^n: edge t = (i,j) contributes bit
/// x_{i mod n} XOR x_{j mod n}, edges in canonical order.
int apply_matching(const std::vector<std::pair<int, int>>& matching, int n, int x);

struct NpmInstance {
    FunctionTable table;
    JointDistribution dist;
    int n = 0;
    int radius = 0;              // floor(n/3)
    std::int64_t matchings = 0;  // (2n-1)!!
};

/// Noisy Partial Matching. X = {0,1}^n; Y = pairs (M, w) indexed as
/// y = matching_index * 2^n + w. f(x,(M,w)) = b when the Hamming distance
/// of (Mx) xor b^n from w is at most floor(n/3), else 0 (total by the
/// fallback clause; at most one such b exists for n >= 2). The returned
/// distribution draws x and M uniformly, then w uniformly from the radius-
/// floor(n/3) Hamming ball around Mx or around (Mx) xor 1^n, each with
/// probability 1/2.
NpmInstance make_npm(int n, const GeneratorLimits& limits = {});

} // namespace oneway
