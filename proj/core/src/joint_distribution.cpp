#include "oneway/joint_distribution.hpp"

#include <cmath>
#include <string>

#include "oneway/errors.hpp"

namespace oneway {

void JointDistribution::validate() const {
    if (x_size < 1 || y_size < 1)
        throw validation_error("distribution: x_size and y_size must be >= 1");
    if (p.size() != static_cast<std::size_t>(x_size) * static_cast<std::size_t>(y_size))
        throw validation_error("distribution: p has " + std::to_string(p.size()) +
                               " cells, expected " + std::to_string(x_size) + "*" +
                               std::to_string(y_size));
    double total = 0.0;
    for (int x = 0; x < x_size; ++x) {
        for (int y = 0; y < y_size; ++y) {
            const double v = at(x, y);
            if (!(v >= 0.0))
                throw validation_error("distribution: p[" + std::to_string(x) + "][" +
                                       std::to_string(y) + "] = " + std::to_string(v) +
                                       " is negative or NaN");
            total += v;
        }
    }
    if (std::abs(total - 1.0) > kMassTolerance)
        throw validation_error("distribution: total mass " + std::to_string(total) +
                               " differs from 1 by more than 1e-9");
}

double JointDistribution::row_mass(int x) const {
    double s = 0.0;
    for (int y = 0; y < y_size; ++y) s += at(x, y);
    return s;
}

std::vector<double> JointDistribution::x_marginal() const {
    std::vector<double> m(x_size, 0.0);
    for (int x = 0; x < x_size; ++x) m[x] = row_mass(x);
    return m;
}

std::vector<double> JointDistribution::y_marginal() const {
    std::vector<double> m(y_size, 0.0);
    for (int x = 0; x < x_size; ++x)
        for (int y = 0; y < y_size; ++y) m[y] += at(x, y);
    return m;
}

std::vector<double> JointDistribution::conditional_row(int x) const {
    if (x < 0 || x >= x_size)
        throw validation_error("conditional_row: x index " + std::to_string(x) + " out of range");
    const double mass = row_mass(x);
    if (mass <= 0.0)
        throw validation_error("conditional_row: row " + std::to_string(x) +
                               " has zero mass; conditioning undefined");
    std::vector<double> r(y_size);
    for (int y = 0; y < y_size; ++y) r[y] = at(x, y) / mass;
    return r;
}

bool JointDistribution::is_product(double tol) const {
    const auto px = x_marginal();
    const auto py = y_marginal();
    double worst = 0.0;
    for (int x = 0; x < x_size; ++x)
        for (int y = 0; y < y_size; ++y)
            worst = std::max(worst, std::abs(at(x, y) - px[x] * py[y]));
    return worst <= tol;
}

JointDistribution JointDistribution::uniform(int x_size, int y_size) {
    JointDistribution d(x_size, y_size);
    const double v = 1.0 / (static_cast<double>(x_size) * static_cast<double>(y_size));
    for (auto& e : d.p) e = v;
    return d;
}

JointDistribution JointDistribution::product(const std::vector<double>& px,
                                             const std::vector<double>& py) {
    JointDistribution d(static_cast<int>(px.size()), static_cast<int>(py.size()));
    for (std::size_t x = 0; x < px.size(); ++x)
        for (std::size_t y = 0; y < py.size(); ++y)
            d.p[x * py.size() + y] = px[x] * py[y];
    return d;
}

} // namespace oneway
