#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oneway/joint_distribution.hpp"

namespace oneway {

// Exact Shannon-theoretic quantities on explicit finite mass functions.
// All logarithms are base 2; entropies are clamped to >= 0 after floating
// rounding, and mutual informations below 1e-12 are flushed to exactly 0.

constexpr double kConstructTol = 1e-12; // construction-time mass tolerance
constexpr double kCompareTol = 1e-9;    // inequality comparison tolerance

/// A probability mass function: entries >= 0 summing to 1 within 1e-12.
struct MassFunction {
    std::vector<double> probs;

    MassFunction() = default;
    explicit MassFunction(std::vector<double> p) : probs(std::move(p)) {}

    std::size_t support_size() const { return probs.size(); }
    void validate() const;

    static MassFunction uniform(std::size_t n);
    static MassFunction point(std::size_t n, std::size_t at);
};

/// A joint mass function over axes (n_1, ..., n_r), flat row-major storage
/// (last axis fastest). Any grouping of axes yields a valid marginal.
struct LabeledJoint {
    std::vector<int> axes;
    std::vector<double> probs;

    LabeledJoint() = default;
    LabeledJoint(std::vector<int> axis_sizes, std::vector<double> p);

    std::size_t cell_count() const;
    void validate() const;

    /// Marginal over the selected axes, in the order listed.
    LabeledJoint marginal(std::span<const int> keep_axes) const;

    static LabeledJoint from_matrix(const JointDistribution& d);
};

double entropy(const MassFunction& p);
double entropy(std::span<const double> probs); // raw convenience overload

/// S(p) = -p log p - (1-p) log (1-p), with S(0) = S(1) = 0.
double binary_entropy(double p);

/// I(X:Y) = S(X) + S(Y) - S(XY) on a 2-axis matrix; clamped at 0.
double mutual_information(const JointDistribution& mu);

/// Entropy of the marginal over a group of axes.
double group_entropy(const LabeledJoint& j, std::span<const int> axes);

/// I(A:B | C) over disjoint axis groups; C may be empty. Axes not listed in
/// any group are marginalized out. Overlapping groups are rejected.
double conditional_mutual_information(const LabeledJoint& j,
                                      std::span<const int> a_axes,
                                      std::span<const int> b_axes,
                                      std::span<const int> c_axes);

/// Terms I(X_i : M | X_1...X_{i-1}) for i = 1..n, where the joint has axes
/// (X_1, ..., X_n, M), M last. The terms sum to I(X_1...X_n : M).
std::vector<double> chain_rule_terms(const LabeledJoint& j);

/// S(Pe) + Pe * log2(alphabet - 1); the Fano upper bound on S(X|Y).
double fano_bound(double pe, int alphabet);

/// -log2 of the largest entry.
double min_entropy(const MassFunction& p);

/// Sum of absolute differences, in [0, 2].
double l1_distance(const MassFunction& p, const MassFunction& q);
double l1_distance(std::span<const double> p, std::span<const double> q);

/// KL divergence sum p log2(p/q), +inf when support(p) is not in support(q).
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// The joint (X', Y') with X' = X and Y' | X'=x distributed as m independent
/// copies of Y | X=x. The Y' axis is Y^m in mixed-radix order (first copy is
/// the most significant digit). Rows of zero mass stay zero.
JointDistribution infadd_expand(const JointDistribution& mu, int m,
                                std::int64_t max_cells = 1'000'000);

} // namespace oneway
