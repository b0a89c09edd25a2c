#include "oneway/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "oneway/errors.hpp"

namespace oneway {

namespace {

double plogp(double p) {
    return p > 0.0 ? -p * std::log2(p) : 0.0;
}

double flush_tiny(double v) {
    if (v < kConstructTol) return 0.0;
    return v;
}

} // namespace

void MassFunction::validate() const {
    if (probs.empty())
        throw validation_error("mass function: empty support");
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] >= 0.0))
            throw validation_error("mass function: entry " + std::to_string(i) +
                                   " is negative or NaN");
        total += probs[i];
    }
    if (std::abs(total - 1.0) > kConstructTol)
        throw validation_error("mass function: total mass " + std::to_string(total) +
                               " differs from 1 by more than 1e-12");
}

MassFunction MassFunction::uniform(std::size_t n) {
    return MassFunction(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

MassFunction MassFunction::point(std::size_t n, std::size_t at) {
    std::vector<double> p(n, 0.0);
    p.at(at) = 1.0;
    return MassFunction(std::move(p));
}

LabeledJoint::LabeledJoint(std::vector<int> axis_sizes, std::vector<double> p)
    : axes(std::move(axis_sizes)), probs(std::move(p)) {}

std::size_t LabeledJoint::cell_count() const {
    std::size_t c = 1;
    for (int a : axes) c *= static_cast<std::size_t>(a);
    return c;
}

void LabeledJoint::validate() const {
    if (axes.empty())
        throw validation_error("labeled joint: no axes");
    for (std::size_t i = 0; i < axes.size(); ++i)
        if (axes[i] < 1)
            throw validation_error("labeled joint: axis " + std::to_string(i) +
                                   " has size " + std::to_string(axes[i]));
    if (probs.size() != cell_count())
        throw validation_error("labeled joint: " + std::to_string(probs.size()) +
                               " cells, expected " + std::to_string(cell_count()));
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] >= 0.0))
            throw validation_error("labeled joint: entry " + std::to_string(i) +
                                   " is negative or NaN");
        total += probs[i];
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw validation_error("labeled joint: total mass " + std::to_string(total) +
                               " differs from 1 by more than 1e-9");
}

LabeledJoint LabeledJoint::from_matrix(const JointDistribution& d) {
    return LabeledJoint({d.x_size, d.y_size}, d.p);
}

LabeledJoint LabeledJoint::marginal(std::span<const int> keep_axes) const {
    const int r = static_cast<int>(axes.size());
    std::vector<bool> seen(axes.size(), false);
    for (int a : keep_axes) {
        if (a < 0 || a >= r)
            throw validation_error("marginal: axis " + std::to_string(a) + " out of range");
        if (seen[a])
            throw validation_error("marginal: axis " + std::to_string(a) + " listed twice");
        seen[a] = true;
    }
    std::vector<std::size_t> strides(axes.size());
    std::size_t s = 1;
    for (int a = r - 1; a >= 0; --a) {
        strides[a] = s;
        s *= static_cast<std::size_t>(axes[a]);
    }
    std::vector<int> out_axes;
    out_axes.reserve(keep_axes.size());
    for (int a : keep_axes) out_axes.push_back(axes[a]);
    LabeledJoint out(out_axes, std::vector<double>(
        std::accumulate(out_axes.begin(), out_axes.end(), std::size_t{1},
                        [](std::size_t acc, int v) { return acc * v; }), 0.0));

    std::vector<int> idx(axes.size(), 0);
    for (std::size_t flat = 0; flat < probs.size(); ++flat) {
        std::size_t rem = flat;
        for (int a = 0; a < r; ++a) {
            idx[a] = static_cast<int>(rem / strides[a]);
            rem %= strides[a];
        }
        std::size_t out_flat = 0;
        for (int a : keep_axes) out_flat = out_flat * axes[a] + idx[a];
        out.probs[out_flat] += probs[flat];
    }
    return out;
}

double entropy(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs) h += plogp(p);
    return std::max(0.0, h);
}

double entropy(const MassFunction& p) {
    return entropy(std::span<const double>(p.probs));
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw validation_error("binary_entropy: p = " + std::to_string(p) +
                               " outside [0,1]");
    return std::max(0.0, plogp(p) + plogp(1.0 - p));
}

double mutual_information(const JointDistribution& mu) {
    const auto px = mu.x_marginal();
    const auto py = mu.y_marginal();
    const double mi = entropy(px) + entropy(py) - entropy(mu.p);
    return flush_tiny(mi);
}

double group_entropy(const LabeledJoint& j, std::span<const int> axes) {
    if (axes.empty()) return 0.0;
    const auto m = j.marginal(axes);
    return entropy(std::span<const double>(m.probs));
}

namespace {

std::vector<int> concat_groups(std::span<const int> a, std::span<const int> b) {
    std::vector<int> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

} // namespace

double conditional_mutual_information(const LabeledJoint& j,
                                      std::span<const int> a_axes,
                                      std::span<const int> b_axes,
                                      std::span<const int> c_axes) {
    std::vector<bool> used(j.axes.size(), false);
    auto mark = [&](std::span<const int> g, const char* name) {
        for (int a : g) {
            if (a < 0 || a >= static_cast<int>(j.axes.size()))
                throw validation_error(std::string("conditional MI: ") + name + " axis " +
                                       std::to_string(a) + " out of range");
            if (used[a])
                throw validation_error(std::string("conditional MI: axis ") +
                                       std::to_string(a) + " appears in two groups");
            used[a] = true;
        }
    };
    mark(a_axes, "A");
    mark(b_axes, "B");
    mark(c_axes, "C");
    if (a_axes.empty() || b_axes.empty())
        throw validation_error("conditional MI: A and B groups must be nonempty");

    const auto ac = concat_groups(a_axes, c_axes);
    const auto bc = concat_groups(b_axes, c_axes);
    const auto abc = concat_groups(concat_groups(a_axes, b_axes), c_axes);
    const double v = group_entropy(j, ac) + group_entropy(j, bc) -
                     group_entropy(j, std::span<const int>(c_axes)) - group_entropy(j, abc);
    return flush_tiny(v);
}

std::vector<double> chain_rule_terms(const LabeledJoint& j) {
    const int r = static_cast<int>(j.axes.size());
    if (r < 2)
        throw validation_error("chain_rule_terms: need at least one X axis plus M");
    const int n = r - 1;
    std::vector<double> terms(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> a{i};
        std::vector<int> b{n}; // M is the last axis
        std::vector<int> c(i);
        for (int t = 0; t < i; ++t) c[t] = t;
        terms[i] = conditional_mutual_information(j, a, b, c);
    }
    return terms;
}

double fano_bound(double pe, int alphabet) {
    if (alphabet < 2)
        throw validation_error("fano_bound: alphabet size must be >= 2");
    if (!(pe >= 0.0 && pe <= 1.0))
        throw validation_error("fano_bound: Pe outside [0,1]");
    return binary_entropy(pe) + pe * std::log2(static_cast<double>(alphabet - 1));
}

double min_entropy(const MassFunction& p) {
    const double mx = *std::max_element(p.probs.begin(), p.probs.end());
    if (mx <= 0.0)
        throw validation_error("min_entropy: all-zero mass function");
    return std::max(0.0, -std::log2(mx));
}

double l1_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw validation_error("l1_distance: support sizes differ (" +
                               std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return s;
}

double l1_distance(const MassFunction& p, const MassFunction& q) {
    return l1_distance(std::span<const double>(p.probs), std::span<const double>(q.probs));
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw validation_error("kl_divergence: support sizes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
        s += p[i] * std::log2(p[i] / q[i]);
    }
    return std::max(0.0, s);
}

JointDistribution infadd_expand(const JointDistribution& mu, int m,
                                std::int64_t max_cells) {
    if (m < 1)
        throw validation_error("infadd_expand: m must be >= 1");
    double cells = 1.0;
    for (int i = 0; i < m; ++i) cells *= mu.y_size;
    if (cells > static_cast<double>(max_cells))
        throw cap_error("infadd_expand: y_size^m = " + std::to_string(cells) +
                        " exceeds cell limit " + std::to_string(max_cells));
    const std::int64_t ym = static_cast<std::int64_t>(cells);
    JointDistribution out(mu.x_size, static_cast<int>(ym));
    for (int x = 0; x < mu.x_size; ++x) {
        const double mass = mu.row_mass(x);
        if (mass <= 0.0) continue;
        const auto row = mu.conditional_row(x);
        for (std::int64_t j = 0; j < ym; ++j) {
            double prod = mass;
            std::int64_t rem = j;
            for (int t = 0; t < m; ++t) {
                prod *= row[rem % mu.y_size];
                rem /= mu.y_size;
            }
            out.at(x, static_cast<int>(j)) = prod;
        }
    }
    return out;
}

} // namespace oneway
