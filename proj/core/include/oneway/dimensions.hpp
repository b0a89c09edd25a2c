#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oneway/function_table.hpp"

namespace oneway {

/// Witness for a shattered column set: the columns, and for pseudo-dimension
/// the per-column thresholds (same order as columns).
struct ShatterWitness {
    std::vector<int> columns;
    std::vector<double> thresholds;
};

struct DimensionCaps {
    int max_columns = 24; // refuse exact search beyond this many Y columns
    int max_dim = 20;
};

/// True iff the row patterns of a total boolean table restricted to the
/// given columns realize all 2^|S| sign patterns.
bool shatters(const FunctionTable& f, std::span<const int> columns);

struct VcResult {
    int dimension = 0;
    ShatterWitness witness; // empty columns when dimension == 0
};

/// Exact VC dimension of the row family {f_x}, by exhaustive search over
/// column subsets of increasing size (no size-s subset shattered implies no
/// size-(s+1) subset is). Returns the lexicographically smallest witness of
/// maximum size.
VcResult vc_dimension(const FunctionTable& f, const DimensionCaps& caps = {});

/// Sum_{i=0}^{d} C(m, i) in exact integer arithmetic; throws cap_error on
/// 64-bit overflow.
std::uint64_t sauer_bound(int m, int d);

/// True iff the columns are gamma-shattered by the scaled rows (value+1)/k
/// with the given per-column thresholds.
bool gamma_shattered(const FunctionTable& f, double gamma,
                     std::span<const int> columns,
                     std::span<const double> thresholds);

struct PdimResult {
    int dimension = 0;
    ShatterWitness witness;
};

/// Exact gamma-pseudo-dimension of the scaled row family. Threshold
/// candidates per column are midpoints of value pairs more than 2*gamma
/// apart, which exhaust all High/Low classifications a real threshold can
/// induce.
PdimResult pseudo_dimension(const FunctionTable& f, double gamma,
                            const DimensionCaps& caps = {});

} // namespace oneway
