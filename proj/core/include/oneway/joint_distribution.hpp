#pragma once

#include <vector>

namespace oneway {

/// Probability mass matrix over X x Y. Total mass must be 1 within
/// kMassTolerance; entries are non-negative.
struct JointDistribution {
    static constexpr double kMassTolerance = 1e-9;

    int x_size = 0;
    int y_size = 0;
    std::vector<double> p; // row-major

    JointDistribution() = default;
    JointDistribution(int xs, int ys)
        : x_size(xs), y_size(ys),
          p(static_cast<std::size_t>(xs) * static_cast<std::size_t>(ys), 0.0) {}

    double at(int x, int y) const {
        return p[static_cast<std::size_t>(x) * y_size + y];
    }
    double& at(int x, int y) {
        return p[static_cast<std::size_t>(x) * y_size + y];
    }

    void validate() const;

    double row_mass(int x) const;
    std::vector<double> x_marginal() const;
    std::vector<double> y_marginal() const;

    /// Distribution of Y given X = x, normalized to sum 1 within 1e-12.
    /// Conditioning on a zero-mass row throws; zeros are never silently
    /// renormalized.
    std::vector<double> conditional_row(int x) const;

    /// True iff the max-entry deviation from the outer product of the
    /// marginals is at most tol.
    bool is_product(double tol) const;

    static JointDistribution uniform(int x_size, int y_size);
    static JointDistribution product(const std::vector<double>& px,
                                     const std::vector<double>& py);
};

} // namespace oneway
