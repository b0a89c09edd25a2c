#pragma once

#include <span>
#include <string>
#include <vector>

#include "oneway/function_table.hpp"
#include "oneway/joint_distribution.hpp"

namespace oneway {

/// Witness for a rectangle-bound value: the row set S, Bob's best response
/// g : Y -> Z, the response's error under the conditioned distribution, the
/// rectangle mass mu(S x Y) and value = -log2(mass) bits.
struct RectangleCertificate {
    std::vector<int> rows;    // S, sorted ascending
    std::vector<int> response; // g, one value per y
    double error = 0.0;
    double mass = 0.0;
    double value_bits = 0.0;

    std::string to_json() const;
    static RectangleCertificate from_json(const std::string& text);
};

struct BestResponse {
    std::vector<int> response;
    double error = 0.0;
    double mass = 0.0;
};

/// Bob's optimal response on the rectangle S x Y: per column, the output z
/// maximizing the conditioned mass of rows agreeing with z (undefined cells
/// count as agreeing with every z). Ties break toward smaller z. Throws on
/// zero rectangle mass.
BestResponse best_response(const FunctionTable& f, const JointDistribution& mu,
                           std::span<const int> rows);

/// Re-verify a certificate against f and mu: recomputes the best response,
/// the mass and the value, and checks the stored fields within 1e-12.
bool certificate_valid(const RectangleCertificate& cert, const FunctionTable& f,
                       const JointDistribution& mu, double tol = 1e-12);

struct RectangleOptions {
    int max_rows = 24;  // exact enumeration cap on |X|
    int threads = 1;    // parallel partitions of the subset space
};

/// Exact one-way rectangle bound: minimum of log2(1/mu(S x Y)) over nonempty
/// S whose best response has error <= eps, by Gray-code enumeration with
/// incremental per-column tallies. Deterministic: minimum value, then
/// lexicographically smallest S. Throws cap_error beyond max_rows, and when
/// no positive-mass rectangle is feasible (reported explicitly).
RectangleCertificate rec_exact(const FunctionTable& f, const JointDistribution& mu,
                               double eps, const RectangleOptions& opts = {});

/// Greedy upper bound on the rectangle bound: grows S from the heaviest
/// feasible rows, adding the row that minimizes the resulting error per unit
/// of mass gained while feasibility holds; restarts from the top-5 seed
/// rows. The returned certificate is always re-verified feasible.
RectangleCertificate rec_greedy(const FunctionTable& f, const JointDistribution& mu,
                                double eps);

} // namespace oneway
