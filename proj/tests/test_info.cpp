#include <doctest.h>

#include <cmath>

#include "oneway/errors.hpp"
#include "oneway/info.hpp"
#include "oneway/rng.hpp"

using namespace oneway;

namespace {

JointDistribution random_joint(int nx, int ny, RandomStream& rng) {
    JointDistribution d(nx, ny);
    double total = 0.0;
    for (auto& cell : d.p) total += cell = rng.next_unit();
    for (auto& cell : d.p) cell /= total;
    return d;
}

LabeledJoint random_labeled(const std::vector<int>& axes, RandomStream& rng) {
    std::size_t cells = 1;
    for (int a : axes) cells *= static_cast<std::size_t>(a);
    std::vector<double> p(cells);
    double total = 0.0;
    for (auto& cell : p) total += cell = rng.next_unit();
    for (auto& cell : p) cell /= total;
    return LabeledJoint(axes, std::move(p));
}

} // namespace

TEST_CASE("entropy basics") {
    CHECK(entropy(MassFunction::uniform(8)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(entropy(MassFunction::point(5, 2)) == 0.0);
    CHECK(entropy(MassFunction({0.25, 0.75})) == doctest::Approx(0.8112781244591328));
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.25) == doctest::Approx(0.8112781244591328));
    CHECK_THROWS_AS(binary_entropy(-0.1), validation_error);
    CHECK_THROWS_AS(binary_entropy(1.1), validation_error);
}

TEST_CASE("mutual information") {
    SUBCASE("product gives exactly zero") {
        const auto d = JointDistribution::product({0.3, 0.7}, {0.2, 0.35, 0.45});
        CHECK(mutual_information(d) == 0.0);
    }
    SUBCASE("perfectly correlated bits give 1") {
        JointDistribution d(2, 2);
        d.at(0, 0) = d.at(1, 1) = 0.5;
        CHECK(mutual_information(d) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("(0.4,0.1;0.1,0.4) gives 1 - S(0.2)") {
        JointDistribution d(2, 2);
        d.at(0, 0) = d.at(1, 1) = 0.4;
        d.at(0, 1) = d.at(1, 0) = 0.1;
        CHECK(mutual_information(d) ==
              doctest::Approx(1.0 - binary_entropy(0.2)).epsilon(1e-12));
        CHECK(mutual_information(d) == doctest::Approx(0.2780719051126377));
    }
}

TEST_CASE("nonnegativity and the S(X)+S(Y) >= S(XY) bound on 1000 random joints") {
    RandomStream rng(42);
    for (int i = 0; i < 1000; ++i) {
        const auto d = random_joint(2 + static_cast<int>(rng.next_u64() % 4),
                                    2 + static_cast<int>(rng.next_u64() % 4), rng);
        const double mi = mutual_information(d);
        CHECK(mi >= 0.0);
        const double sx = entropy(std::span<const double>(d.x_marginal()));
        const double sy = entropy(std::span<const double>(d.y_marginal()));
        CHECK(mi <= std::min(sx, sy) + 1e-9);
    }
}

TEST_CASE("conditional mutual information") {
    SUBCASE("independent given C") {
        // C fair bit; given C=c, A and B are independent coins with bias
        // depending on c. I(A:B|C) must be 0.
        std::vector<double> p(8, 0.0);
        auto set = [&](int a, int b, int c, double v) { p[a * 4 + b * 2 + c] = v; };
        for (int c = 0; c < 2; ++c) {
            const double pa = c == 0 ? 0.3 : 0.8;
            const double pb = c == 0 ? 0.6 : 0.2;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    set(a, b, c, 0.5 * (a ? pa : 1 - pa) * (b ? pb : 1 - pb));
        }
        const LabeledJoint j({2, 2, 2}, p);
        const std::vector<int> ga{0}, gb{1}, gc{2};
        CHECK(conditional_mutual_information(j, ga, gb, gc) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("trivial C equals plain MI") {
        RandomStream rng(7);
        const auto j = random_labeled({3, 3, 1}, rng);
        const std::vector<int> ga{0}, gb{1}, gc{2};
        JointDistribution flat(3, 3);
        flat.p = j.probs;
        CHECK(conditional_mutual_information(j, ga, gb, gc) ==
              doctest::Approx(mutual_information(flat)).epsilon(1e-12));
    }
    SUBCASE("matches the expectation over C computed directly") {
        RandomStream rng(11);
        const auto j = random_labeled({2, 2, 2}, rng);
        const std::vector<int> ga{0}, gb{1}, gc{2};
        const double cmi = conditional_mutual_information(j, ga, gb, gc);
        // Direct: sum_c Pr[c] I(A:B | C=c).
        double direct = 0.0;
        for (int c = 0; c < 2; ++c) {
            JointDistribution cond(2, 2);
            double mass = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    mass += cond.at(a, b) = j.probs[a * 4 + b * 2 + c];
            for (auto& v : cond.p) v /= mass;
            direct += mass * mutual_information(cond);
        }
        CHECK(cmi == doctest::Approx(direct).epsilon(1e-9));
    }
    SUBCASE("overlapping groups are rejected") {
        RandomStream rng(3);
        const auto j = random_labeled({2, 2, 2}, rng);
        const std::vector<int> ga{0, 1}, gb{1}, gc{};
        CHECK_THROWS_AS(conditional_mutual_information(j, ga, gb, gc), validation_error);
    }
}

TEST_CASE("chain rule: terms sum to the total MI") {
    SUBCASE("M independent of all X_i gives zeros") {
        // (X1,X2) arbitrary, M independent fair bit.
        RandomStream rng(5);
        auto base = random_labeled({2, 2}, rng);
        std::vector<double> p(8);
        for (int i = 0; i < 4; ++i) {
            p[i * 2] = base.probs[i] * 0.5;
            p[i * 2 + 1] = base.probs[i] * 0.5;
        }
        const LabeledJoint j({2, 2, 2}, p);
        for (double term : chain_rule_terms(j))
            CHECK(term == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("n = 1 gives the single MI term") {
        RandomStream rng(6);
        const auto j = random_labeled({3, 4}, rng);
        const auto terms = chain_rule_terms(j);
        REQUIRE(terms.size() == 1);
        JointDistribution flat(3, 4);
        flat.p = j.probs;
        CHECK(terms[0] == doctest::Approx(mutual_information(flat)).epsilon(1e-12));
    }
    SUBCASE("random joints: sum equals I(X1..Xn : M) within 1e-9") {
        RandomStream rng(8);
        for (int rep = 0; rep < 50; ++rep) {
            const bool four = rep % 2 == 0;
            const auto axes = four ? std::vector<int>{2, 2, 2, 2} : std::vector<int>{2, 3, 2};
            const auto j = random_labeled(axes, rng);
            const auto terms = chain_rule_terms(j);
            double sum = 0.0;
            for (double t : terms) sum += t;
            // Direct I(X1...Xn : M): flatten all X axes into one.
            std::size_t xs = 1;
            for (std::size_t a = 0; a + 1 < axes.size(); ++a) xs *= axes[a];
            JointDistribution flat(static_cast<int>(xs), axes.back());
            flat.p = j.probs;
            CHECK(sum == doctest::Approx(mutual_information(flat)).epsilon(1e-9));
        }
    }
}

TEST_CASE("fano bound") {
    CHECK(fano_bound(0.0, 4) == 0.0);
    CHECK(fano_bound(0.5, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fano_bound(0.25, 5) == doctest::Approx(0.8112781244591328 + 0.5));
    CHECK_THROWS_AS(fano_bound(0.1, 1), validation_error);
}

TEST_CASE("Fano inequality dominates S(X|Y) on 1000 random joints") {
    RandomStream rng(99);
    for (int i = 0; i < 1000; ++i) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);
        const auto d = random_joint(n, n, rng);
        double pe = 0.0;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (x != y) pe += d.at(x, y);
        const double sxy = entropy(std::span<const double>(d.p));
        const double sy = entropy(std::span<const double>(d.y_marginal()));
        const double cond = sxy - sy; // S(X|Y)
        CHECK(fano_bound(pe, n) >= cond - 1e-9);
    }
}

TEST_CASE("binary entropy tail bounds on a 1e-3 grid") {
    for (int i = 0; i <= 500; ++i) {
        const double delta = i * 1e-3;
        CHECK(binary_entropy(0.5 + delta) <= 1.0 - 2.0 * delta * delta + 1e-12);
        CHECK(binary_entropy(delta) <= 2.0 * std::sqrt(delta) + 1e-12);
    }
}

TEST_CASE("min entropy") {
    CHECK(min_entropy(MassFunction::uniform(16)) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(min_entropy(MassFunction::point(4, 1)) == 0.0);
    CHECK(min_entropy(MassFunction({0.5, 0.25, 0.25})) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("l1 distance") {
    const MassFunction p({0.7, 0.3});
    const MassFunction q({0.5, 0.5});
    CHECK(l1_distance(p, p) == 0.0);
    CHECK(l1_distance(p, q) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(l1_distance(MassFunction::point(2, 0), MassFunction::point(2, 1)) == 2.0);
    CHECK_THROWS_AS(l1_distance(p, MassFunction({1.0})), validation_error);
}

TEST_CASE("infadd expansion") {
    SUBCASE("m = 1 is the identity") {
        RandomStream rng(21);
        const auto d = random_joint(3, 3, rng);
        const auto e = infadd_expand(d, 1);
        REQUIRE(e.p.size() == d.p.size());
        for (std::size_t i = 0; i < d.p.size(); ++i)
            CHECK(e.p[i] == doctest::Approx(d.p[i]).epsilon(1e-12));
    }
    SUBCASE("product distribution stays at zero MI for any m") {
        const auto d = JointDistribution::product({0.4, 0.6}, {0.1, 0.9});
        for (int m = 1; m <= 3; ++m)
            CHECK(mutual_information(infadd_expand(d, m)) <= 1e-9);
    }
    SUBCASE("X marginal is unchanged and rows are product rows") {
        RandomStream rng(22);
        const auto d = random_joint(3, 3, rng);
        const auto e = infadd_expand(d, 2);
        CHECK(e.y_size == 9);
        const auto mx0 = d.x_marginal();
        const auto mx1 = e.x_marginal();
        for (int x = 0; x < 3; ++x) CHECK(mx1[x] == doctest::Approx(mx0[x]).epsilon(1e-12));
        const auto row = d.conditional_row(0);
        const auto erow = e.conditional_row(0);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                CHECK(erow[a + 3 * b] == doctest::Approx(row[a] * row[b]).epsilon(1e-12));
    }
    SUBCASE("I(X':Y') <= m I(X:Y) on 100 random 3x3 joints, m in {1,2,3}") {
        RandomStream rng(23);
        for (int rep = 0; rep < 100; ++rep) {
            const auto d = random_joint(3, 3, rng);
            const double mi = mutual_information(d);
            for (int m = 1; m <= 3; ++m)
                CHECK(mutual_information(infadd_expand(d, m)) <= m * mi + 1e-9);
        }
    }
    SUBCASE("cell cap") {
        const auto d = JointDistribution::uniform(2, 100);
        CHECK_THROWS_AS(infadd_expand(d, 4), cap_error); // 10^8 cells
    }
}

TEST_CASE("kl divergence basics") {
    const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
    CHECK(kl_divergence(p, p) == 0.0);
    CHECK(kl_divergence(p, q) ==
          doctest::Approx(0.5 * std::log2(2.0) + 0.5 * std::log2(0.5 / 0.75)));
    const std::vector<double> r{1.0, 0.0};
    CHECK(std::isinf(kl_divergence(p, r)));
}
