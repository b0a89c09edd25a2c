#include "oneway/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oneway/errors.hpp"

namespace oneway {

namespace {

void require_hermitian(const Cmat& a, const char* what) {
    if (a.rows() != a.cols())
        throw validation_error(std::string(what) + ": matrix is not square");
    const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (dev > kQuantumTol)
        throw validation_error(std::string(what) + ": not Hermitian (max deviation " +
                               std::to_string(dev) + ")");
}

} // namespace

void DensityMatrix::validate() const {
    require_hermitian(m, "density matrix");
    if (dim() < 1 || dim() > kMaxQuantumDim)
        throw validation_error("density matrix: dimension " + std::to_string(dim()) +
                               " outside [1," + std::to_string(kMaxQuantumDim) + "]");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > kQuantumTol || std::abs(m.trace().imag()) > kQuantumTol)
        throw validation_error("density matrix: trace " + std::to_string(tr) + " is not 1");
    const auto ev = hermitian_eigenvalues(m);
    if (ev.minCoeff() < -kQuantumTol)
        throw validation_error("density matrix: negative eigenvalue " +
                               std::to_string(ev.minCoeff()));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& state) {
    Eigen::VectorXcd v = state / state.norm();
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    return DensityMatrix(Cmat::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& probs) {
    Cmat m = Cmat::Zero(probs.size(), probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) m(i, i) = probs[i];
    return DensityMatrix(std::move(m));
}

void QuantumEnsemble::validate() const {
    if (states.empty())
        throw validation_error("ensemble: empty");
    const int d = states.front().second.dim();
    double total = 0.0;
    for (const auto& [p, rho] : states) {
        if (!(p >= 0.0))
            throw validation_error("ensemble: negative prior");
        if (rho.dim() != d)
            throw validation_error("ensemble: mixed dimensions (" + std::to_string(d) +
                                   " vs " + std::to_string(rho.dim()) + ")");
        rho.validate();
        total += p;
    }
    if (std::abs(total - 1.0) > kQuantumTol)
        throw validation_error("ensemble: priors sum to " + std::to_string(total));
}

int QuantumEnsemble::dim() const {
    return states.empty() ? 0 : states.front().second.dim();
}

DensityMatrix QuantumEnsemble::average() const {
    Cmat avg = Cmat::Zero(dim(), dim());
    for (const auto& [p, rho] : states) avg += p * rho.m;
    return DensityMatrix(std::move(avg));
}

Eigen::VectorXd hermitian_eigenvalues(const Cmat& a) {
    Eigen::SelfAdjointEigenSolver<Cmat> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double vn_entropy(const DensityMatrix& rho) {
    rho.validate();
    const auto ev = hermitian_eigenvalues(rho.m);
    double h = 0.0;
    for (int i = 0; i < ev.size(); ++i) {
        const double lambda = std::clamp(ev[i], 0.0, 1.0);
        if (lambda > 0.0) h -= lambda * std::log2(lambda);
    }
    return std::max(0.0, h);
}

double trace_norm(const Cmat& a) {
    require_hermitian(a, "trace_norm");
    return hermitian_eigenvalues(a).cwiseAbs().sum();
}

double holevo_chi(const QuantumEnsemble& e) {
    e.validate();
    double chi = vn_entropy(e.average());
    for (const auto& [p, rho] : e.states) chi -= p * vn_entropy(rho);
    return chi < kConstructTol ? 0.0 : chi;
}

double helstrom_success(double p0, const DensityMatrix& rho0,
                        double p1, const DensityMatrix& rho1) {
    if (std::abs(p0 + p1 - 1.0) > kQuantumTol || !(p0 >= 0.0) || !(p1 >= 0.0))
        throw validation_error("helstrom_success: priors must be nonnegative and sum to 1");
    rho0.validate();
    rho1.validate();
    if (rho0.dim() != rho1.dim())
        throw validation_error("helstrom_success: dimension mismatch");
    return 0.5 + 0.5 * trace_norm(p0 * rho0.m - p1 * rho1.m);
}

std::vector<Cmat> helstrom_measurement(double p0, const DensityMatrix& rho0,
                                       double p1, const DensityMatrix& rho1) {
    const Cmat delta = p0 * rho0.m - p1 * rho1.m;
    Eigen::SelfAdjointEigenSolver<Cmat> solver(delta);
    const int d = static_cast<int>(delta.rows());
    Cmat proj = Cmat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        if (solver.eigenvalues()[i] >= 0.0) {
            const Eigen::VectorXcd v = solver.eigenvectors().col(i);
            proj += v * v.adjoint();
        }
    }
    return {proj, Cmat::Identity(d, d) - proj};
}

LabeledJoint measure(const QuantumEnsemble& e, const std::vector<Cmat>& operators) {
    e.validate();
    if (operators.empty())
        throw validation_error("measure: no operators");
    const int d = e.dim();
    Cmat sum = Cmat::Zero(d, d);
    for (std::size_t j = 0; j < operators.size(); ++j) {
        require_hermitian(operators[j], "measurement operator");
        if (operators[j].rows() != d)
            throw validation_error("measure: operator dimension mismatch");
        const auto ev = hermitian_eigenvalues(operators[j]);
        if (ev.minCoeff() < -kQuantumTol)
            throw validation_error("measure: operator " + std::to_string(j) +
                                   " is not positive (eigenvalue " +
                                   std::to_string(ev.minCoeff()) + ")");
        sum += operators[j];
    }
    if ((sum - Cmat::Identity(d, d)).cwiseAbs().maxCoeff() > kQuantumTol)
        throw validation_error("measure: operators do not sum to the identity");

    const int nx = static_cast<int>(e.states.size());
    const int nj = static_cast<int>(operators.size());
    std::vector<double> probs(static_cast<std::size_t>(nx) * nj, 0.0);
    double total = 0.0;
    for (int x = 0; x < nx; ++x) {
        for (int j = 0; j < nj; ++j) {
            double pr = e.states[x].first *
                        (operators[j] * e.states[x].second.m).trace().real();
            if (pr < 0.0) pr = 0.0; // rounding of Tr of a PSD product
            probs[static_cast<std::size_t>(x) * nj + j] = pr;
            total += pr;
        }
    }
    for (auto& p : probs) p /= total;
    LabeledJoint joint({nx, nj}, std::move(probs));
    joint.validate();
    return joint;
}

LargeInfGap largeinf_gap(const QuantumEnsemble& e, const std::vector<Cmat>& operators) {
    if (e.states.size() != 2 || operators.size() != 2)
        throw validation_error("largeinf_gap: needs a binary ensemble and a binary measurement");
    const auto joint = measure(e, operators);
    LargeInfGap gap;
    gap.prior_c = std::min(e.states[0].first, e.states[1].first);
    gap.error_d = joint.probs[1] + joint.probs[2]; // Pr[Z=0,Z'=1] + Pr[Z=1,Z'=0]
    if (gap.error_d > gap.prior_c + kQuantumTol)
        throw cap_error("largeinf_gap: bound not applicable (measurement error " +
                        std::to_string(gap.error_d) + " exceeds min prior " +
                        std::to_string(gap.prior_c) + ")");
    JointDistribution zz(2, 2);
    zz.p = joint.probs;
    gap.mi_bits = mutual_information(zz);
    gap.bound_bits = binary_entropy(gap.prior_c) - binary_entropy(std::min(gap.error_d, 0.5));
    return gap;
}

DensityMatrix random_density(int dim, RandomStream& rng) {
    Cmat g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            g(i, j) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
    Cmat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
}

Cmat random_unitary(int dim, RandomStream& rng) {
    Cmat g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            g(i, j) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
    Eigen::HouseholderQR<Cmat> qr(g);
    Cmat q = qr.householderQ();
    const Cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const std::complex<double> rii = r(i, i);
        q.col(i) *= rii / std::abs(rii);
    }
    return q;
}

std::vector<Cmat> random_two_outcome_measurement(int dim, RandomStream& rng) {
    const Cmat u = random_unitary(dim, rng);
    Cmat m0 = Cmat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double w = rng.next_unit();
        m0 += w * (u.col(i) * u.col(i).adjoint());
    }
    return {m0, Cmat::Identity(dim, dim) - m0};
}

std::vector<Cmat> random_povm(int dim, int outcomes, RandomStream& rng) {
    std::vector<Cmat> raw(outcomes);
    Cmat total = Cmat::Zero(dim, dim);
    for (int j = 0; j < outcomes; ++j) {
        Cmat g(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int c = 0; c < dim; ++c)
                g(i, c) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
        raw[j] = g * g.adjoint();
        total += raw[j];
    }
    // Normalize: M_j = T^{-1/2} A_j T^{-1/2}.
    Eigen::SelfAdjointEigenSolver<Cmat> solver(total);
    Cmat inv_sqrt = Cmat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const Eigen::VectorXcd v = solver.eigenvectors().col(i);
        inv_sqrt += (1.0 / std::sqrt(solver.eigenvalues()[i])) * (v * v.adjoint());
    }
    std::vector<Cmat> out(outcomes);
    for (int j = 0; j < outcomes; ++j) out[j] = inv_sqrt * raw[j] * inv_sqrt;
    return out;
}

} // namespace oneway
