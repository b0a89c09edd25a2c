#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "oneway/info.hpp"
#include "oneway/rng.hpp"

namespace oneway {

using Cmat = Eigen::MatrixXcd;

constexpr double kQuantumTol = 1e-10;
constexpr int kMaxQuantumDim = 16;

/// Positive semi-definite trace-one operator. Validation checks Hermiticity,
/// unit trace and eigenvalues >= -1e-10.
struct DensityMatrix {
    Cmat m;

    DensityMatrix() = default;
    explicit DensityMatrix(Cmat mat) : m(std::move(mat)) {}

    int dim() const { return static_cast<int>(m.rows()); }
    void validate() const;

    static DensityMatrix pure(const Eigen::VectorXcd& state);
    static DensityMatrix maximally_mixed(int dim);
    static DensityMatrix diagonal(const std::vector<double>& probs);
};

/// A list of (prior, state) pairs over a common dimension; priors sum to 1
/// within 1e-10.
struct QuantumEnsemble {
    std::vector<std::pair<double, DensityMatrix>> states;

    void validate() const;
    int dim() const;
    DensityMatrix average() const;
};

/// Sorted eigenvalues of a Hermitian matrix (ascending).
Eigen::VectorXd hermitian_eigenvalues(const Cmat& a);

/// Von Neumann entropy in bits: -sum lambda log2 lambda over eigenvalues
/// clipped to [0,1].
double vn_entropy(const DensityMatrix& rho);

/// Trace norm of a Hermitian matrix: sum of absolute eigenvalues.
double trace_norm(const Cmat& a);

/// Holevo quantity chi = S(sum p_i rho_i) - sum p_i S(rho_i), clamped at 0.
double holevo_chi(const QuantumEnsemble& e);

/// Optimal two-hypothesis discrimination success probability:
/// 1/2 + 1/2 * ||p0 rho0 - p1 rho1||_1.
double helstrom_success(double p0, const DensityMatrix& rho0,
                        double p1, const DensityMatrix& rho1);

/// The measurement attaining it: projector onto the nonnegative eigenspace
/// of p0 rho0 - p1 rho1 (outcome 0 guesses X=0) and its complement.
std::vector<Cmat> helstrom_measurement(double p0, const DensityMatrix& rho0,
                                       double p1, const DensityMatrix& rho1);

/// Outcome joint of measuring each ensemble member: Pr[x, j] =
/// p_x Tr(M_j rho_x), as a 2-axis labeled joint (X first). Operators must be
/// positive within 1e-10 and sum to the identity within 1e-10.
LabeledJoint measure(const QuantumEnsemble& e, const std::vector<Cmat>& operators);

struct LargeInfGap {
    double mi_bits = 0.0;    // I(Z : Z') of the measured joint
    double bound_bits = 0.0; // S(c) - S(d)
    double prior_c = 0.0;    // min prior
    double error_d = 0.0;    // Pr[Z != Z'] under the measurement
};

/// Both sides of the discrimination-information inequality for a binary
/// ensemble and binary measurement: I(Z:Z') and S(c) - S(d) with c the
/// smaller prior and d the prediction error. Throws when d > c (the bound is
/// not applicable).
LargeInfGap largeinf_gap(const QuantumEnsemble& e, const std::vector<Cmat>& operators);

// Seeded random instances (Ginibre states, Haar-ish unitaries, normalized
// random POVMs) for the verification suites.
DensityMatrix random_density(int dim, RandomStream& rng);
Cmat random_unitary(int dim, RandomStream& rng);
std::vector<Cmat> random_two_outcome_measurement(int dim, RandomStream& rng);
std::vector<Cmat> random_povm(int dim, int outcomes, RandomStream& rng);

} // namespace oneway
