#include <doctest.h>

#include <cmath>
#include <complex>

#include "oneway/errors.hpp"
#include "oneway/quantum.hpp"

using namespace oneway;
using namespace std::complex_literals;

namespace {

DensityMatrix qubit_pure(double theta) {
    Eigen::VectorXcd v(2);
    v << std::cos(theta), std::sin(theta);
    return DensityMatrix::pure(v);
}

} // namespace

TEST_CASE("von Neumann entropy") {
    CHECK(vn_entropy(qubit_pure(0.3)) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(vn_entropy(DensityMatrix::maximally_mixed(4)) == doctest::Approx(2.0));
    CHECK(vn_entropy(DensityMatrix::diagonal({0.25, 0.75})) ==
          doctest::Approx(0.8112781244591328));
}

TEST_CASE("entropy of an m-qubit state is at most m") {
    RandomStream rng(11);
    for (int dim : {2, 4, 8}) {
        const double m = std::log2(dim);
        for (int rep = 0; rep < 30; ++rep)
            CHECK(vn_entropy(random_density(dim, rng)) <= m + 1e-9);
    }
}

TEST_CASE("trace norm") {
    CHECK(trace_norm(Cmat::Zero(3, 3)) == doctest::Approx(0.0));
    Cmat d = Cmat::Zero(2, 2);
    d(0, 0) = 0.5;
    d(1, 1) = -0.5;
    CHECK(trace_norm(d) == doctest::Approx(1.0));
    SUBCASE("equal-prior pure-state difference has norm sin(theta)") {
        for (double theta : {0.2, 0.7, 1.2}) {
            const auto a = qubit_pure(0.0);
            const auto b = qubit_pure(theta); // overlap cos(theta)
            CHECK(trace_norm(0.5 * a.m - 0.5 * b.m) ==
                  doctest::Approx(std::sin(theta)).epsilon(1e-9));
        }
    }
    Cmat bad(2, 2);
    bad << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(trace_norm(bad), validation_error);
}

TEST_CASE("holevo quantity") {
    SUBCASE("identical states carry nothing") {
        const auto rho = DensityMatrix::diagonal({0.3, 0.7});
        QuantumEnsemble e{{{0.4, rho}, {0.6, rho}}};
        CHECK(holevo_chi(e) == 0.0);
    }
    SUBCASE("orthogonal pure states at equal priors carry one bit") {
        QuantumEnsemble e{{{0.5, qubit_pure(0.0)},
                          {0.5, qubit_pure(1.5707963267948966)}}};
        CHECK(holevo_chi(e) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("uniform {0,1,+,-} ensemble averages to I/2") {
        const double quarter_pi = 0.7853981633974483;
        QuantumEnsemble e{{{0.25, qubit_pure(0.0)},
                          {0.25, qubit_pure(1.5707963267948966)},
                          {0.25, qubit_pure(quarter_pi)},
                          {0.25, qubit_pure(-quarter_pi)}}};
        CHECK(holevo_chi(e) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("helstrom success probability") {
    SUBCASE("orthogonal pure states discriminate perfectly") {
        CHECK(helstrom_success(0.5, qubit_pure(0.0), 0.5,
                               qubit_pure(1.5707963267948966)) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("identical states leave a fair coin") {
        const auto rho = DensityMatrix::maximally_mixed(2);
        CHECK(helstrom_success(0.5, rho, 0.5, rho) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("overlap cos(theta) gives 1/2 + sin(theta)/2") {
        for (double theta : {0.3, 0.9, 1.4}) {
            CHECK(helstrom_success(0.5, qubit_pure(0.0), 0.5, qubit_pure(theta)) ==
                  doctest::Approx(0.5 + 0.5 * std::sin(theta)).epsilon(1e-9));
        }
    }
    SUBCASE("never below the larger prior") {
        RandomStream rng(13);
        for (int rep = 0; rep < 50; ++rep) {
            const double p0 = 0.05 + 0.9 * rng.next_unit();
            const auto r0 = random_density(2, rng);
            const auto r1 = random_density(2, rng);
            const double s = helstrom_success(p0, r0, 1.0 - p0, r1);
            CHECK(s >= std::max(p0, 1.0 - p0) - 1e-12);
            CHECK(s <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("measurement joints") {
    SUBCASE("computational basis on diagonal states reproduces the classical joint") {
        QuantumEnsemble e{{{0.25, DensityMatrix::diagonal({0.5, 0.5})},
                          {0.75, DensityMatrix::diagonal({0.2, 0.8})}}};
        std::vector<Cmat> basis{Cmat::Zero(2, 2), Cmat::Zero(2, 2)};
        basis[0](0, 0) = 1.0;
        basis[1](1, 1) = 1.0;
        const auto joint = measure(e, basis);
        CHECK(joint.probs[0] == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(joint.probs[1] == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(joint.probs[2] == doctest::Approx(0.15).epsilon(1e-12));
        CHECK(joint.probs[3] == doctest::Approx(0.6).epsilon(1e-12));
    }
    SUBCASE("single-outcome measurement carries no information") {
        RandomStream rng(17);
        QuantumEnsemble e{{{0.5, random_density(2, rng)}, {0.5, random_density(2, rng)}}};
        const auto joint = measure(e, {Cmat::Identity(2, 2)});
        JointDistribution d(2, 1);
        d.p = joint.probs;
        CHECK(mutual_information(d) == 0.0);
    }
    SUBCASE("incomplete measurements are rejected") {
        RandomStream rng(19);
        QuantumEnsemble e{{{1.0, random_density(2, rng)}}};
        std::vector<Cmat> half{0.5 * Cmat::Identity(2, 2)};
        CHECK_THROWS_AS(measure(e, half), validation_error);
    }
}

TEST_CASE("helstrom projector attains the formula; random measurements never beat it") {
    RandomStream rng(23);
    for (int rep = 0; rep < 40; ++rep) {
        const int dim = rep % 2 == 0 ? 2 : 4;
        const double p0 = 0.1 + 0.8 * rng.next_unit();
        const auto r0 = random_density(dim, rng);
        const auto r1 = random_density(dim, rng);
        const double opt = helstrom_success(p0, r0, 1.0 - p0, r1);
        QuantumEnsemble e{{{p0, r0}, {1.0 - p0, r1}}};
        const auto meas = helstrom_measurement(p0, r0, 1.0 - p0, r1);
        const auto joint = measure(e, meas);
        CHECK(joint.probs[0] + joint.probs[3] == doctest::Approx(opt).epsilon(1e-9));
        for (int t = 0; t < 50; ++t) {
            const auto rnd = random_two_outcome_measurement(dim, rng);
            const auto rj = measure(e, rnd);
            const double succ =
                std::max(rj.probs[0] + rj.probs[3], rj.probs[1] + rj.probs[2]);
            CHECK(succ <= opt + 1e-9);
        }
    }
}

TEST_CASE("holevo bound dominates measured information") {
    RandomStream rng(29);
    for (int rep = 0; rep < 100; ++rep) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 3);
        const int nx = 2 + static_cast<int>(rng.next_u64() % 3);
        const int outcomes = 2 + static_cast<int>(rng.next_u64() % 3);
        QuantumEnsemble e;
        std::vector<double> priors(nx);
        double total = 0.0;
        for (auto& p : priors) total += p = 0.05 + rng.next_unit();
        for (int x = 0; x < nx; ++x)
            e.states.emplace_back(priors[x] / total, random_density(dim, rng));
        const double chi = holevo_chi(e);
        const auto joint = measure(e, random_povm(dim, outcomes, rng));
        JointDistribution d(nx, outcomes);
        d.p = joint.probs;
        CHECK(mutual_information(d) <= chi + 1e-9);
        // chi <= min(S(X), S(average)) for classical-quantum joints.
        std::vector<double> prior_only(nx);
        for (int x = 0; x < nx; ++x) prior_only[x] = e.states[x].first;
        CHECK(chi <= entropy(std::span<const double>(prior_only)) + 1e-9);
        CHECK(chi <= vn_entropy(e.average()) + 1e-9);
    }
}

TEST_CASE("largeinf gap") {
    SUBCASE("perfect discrimination at fair priors: both sides are 1") {
        QuantumEnsemble e{{{0.5, qubit_pure(0.0)},
                          {0.5, qubit_pure(1.5707963267948966)}}};
        const auto meas = helstrom_measurement(0.5, e.states[0].second,
                                               0.5, e.states[1].second);
        const auto gap = largeinf_gap(e, meas);
        CHECK(gap.bound_bits == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(gap.mi_bits == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("d = c collapses the bound to zero") {
        const auto rho = DensityMatrix::maximally_mixed(2);
        QuantumEnsemble e{{{0.3, rho}, {0.7, rho}}};
        // Guessing the likelier value errs exactly c = 0.3.
        std::vector<Cmat> guess1{Cmat::Zero(2, 2), Cmat::Identity(2, 2)};
        const auto gap = largeinf_gap(e, guess1);
        CHECK(gap.error_d == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(gap.bound_bits == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("inapplicable when the error exceeds the minority prior") {
        const auto rho = DensityMatrix::maximally_mixed(2);
        QuantumEnsemble e{{{0.3, rho}, {0.7, rho}}};
        std::vector<Cmat> guess0{Cmat::Identity(2, 2), Cmat::Zero(2, 2)};
        CHECK_THROWS_AS(largeinf_gap(e, guess0), cap_error);
    }
    SUBCASE("holds on random qubit instances with the Helstrom measurement") {
        RandomStream rng(31);
        for (int rep = 0; rep < 100; ++rep) {
            const double p0 = 0.1 + 0.8 * rng.next_unit();
            const auto r0 = random_density(2, rng);
            const auto r1 = random_density(2, rng);
            QuantumEnsemble e{{{p0, r0}, {1.0 - p0, r1}}};
            const auto meas = helstrom_measurement(p0, r0, 1.0 - p0, r1);
            const auto gap = largeinf_gap(e, meas);
            CHECK(gap.mi_bits >= gap.bound_bits - 1e-9);
        }
    }
}

TEST_CASE("density matrix validation") {
    Cmat bad(2, 2);
    bad << 1.0, 0.5i, -0.5i, 0.5; // trace 1.5
    CHECK_THROWS_AS(DensityMatrix(bad).validate(), validation_error);
    Cmat neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(DensityMatrix(neg).validate(), validation_error);
    Cmat nonherm(2, 2);
    nonherm << 0.5, 0.1, 0.3, 0.5;
    CHECK_THROWS_AS(DensityMatrix(nonherm).validate(), validation_error);
    QuantumEnsemble mixed{{{0.5, DensityMatrix::maximally_mixed(2)},
                          {0.5, DensityMatrix::maximally_mixed(4)}}};
    CHECK_THROWS_AS(mixed.validate(), validation_error);
}
