#include <doctest.h>

#include <cstdio>
#include <set>

#include "oneway/errors.hpp"
#include "oneway/generators.hpp"
#include "oneway/info.hpp"
#include "oneway/io.hpp"

using namespace oneway;

TEST_CASE("GT/IP/DISJ values match their definitions") {
    const auto gt = make_benchmark(BenchmarkKind::GT, 2);
    CHECK(gt.at(3, 1) == 1);
    CHECK(gt.at(1, 3) == 0);
    CHECK(gt.at(2, 2) == 0);

    const auto ip = make_benchmark(BenchmarkKind::IP, 2);
    CHECK(ip.at(3, 3) == 0); // <11,11> = 1+1 mod 2
    CHECK(ip.at(1, 3) == 1);
    CHECK(ip.at(0, 3) == 0);

    const auto disj = make_benchmark(BenchmarkKind::DISJ, 3);
    CHECK(disj.at(5, 2) == 1); // 101 AND 010 = 0
    CHECK(disj.at(5, 4) == 0);
}

TEST_CASE("benchmark generators are total boolean and validate") {
    for (auto kind : {BenchmarkKind::GT, BenchmarkKind::IP, BenchmarkKind::DISJ}) {
        const auto f = make_benchmark(kind, 3);
        f.validate();
        CHECK(f.is_total());
        CHECK(f.is_boolean());
        CHECK(f.x_size == 8);
        CHECK(f.y_size == 8);
    }
    CHECK_THROWS_AS(make_benchmark(BenchmarkKind::GT, 0), validation_error);
    CHECK_THROWS_AS(make_benchmark(BenchmarkKind::GT, 13), validation_error);
}

TEST_CASE("table invariants are enforced with cell-level messages") {
    FunctionTable f(2, 2, 2, false);
    f.at(1, 1) = 7;
    CHECK_THROWS_WITH_AS(f.validate(),
                         "function table: values[1][1] = 7 out of range [0,1]",
                         validation_error);
    f.at(1, 1) = FunctionTable::kStar;
    CHECK_THROWS_AS(f.validate(), validation_error); // star without partial
    f.partial = true;
    CHECK_NOTHROW(f.validate());
    CHECK_FALSE(f.is_total());
}

TEST_CASE("NPM sizes: 15 matchings on [6], y_size 120 for n=3") {
    CHECK(matching_count(3) == 15);
    CHECK(matching_count(4) == 105);
    const auto inst = make_npm(3);
    CHECK(inst.table.x_size == 8);
    CHECK(inst.table.y_size == 120);
    CHECK(inst.radius == 1);
    inst.table.validate();
    inst.dist.validate();
    CHECK(inst.table.is_total());
}

TEST_CASE("NPM: w = Mx gives output 0") {
    const auto inst = make_npm(3);
    for (std::int64_t mi = 0; mi < inst.matchings; ++mi) {
        const auto matching = matching_from_index(3, mi);
        for (int x = 0; x < 8; ++x) {
            const int w = apply_matching(matching, 3, x);
            const int y = static_cast<int>((mi << 3) | w);
            CAPTURE(mi); CAPTURE(x);
            CHECK(inst.table.at(x, y) == 0);
        }
    }
}

TEST_CASE("NPM distribution: mass 1, uniform x-marginal") {
    const auto inst = make_npm(3);
    double total = 0.0;
    for (double v : inst.dist.p) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    const auto mx = inst.dist.x_marginal();
    for (double v : mx) CHECK(v == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("NPM well-definedness: at most one b passes, exhaustively for n <= 4") {
    for (int n = 2; n <= 4; ++n) {
        const int radius = n / 3;
        const std::int64_t mc = matching_count(n);
        for (std::int64_t mi = 0; mi < mc; ++mi) {
            const auto matching = matching_from_index(n, mi);
            for (int x = 0; x < (1 << n); ++x) {
                const int mx = apply_matching(matching, n, x);
                for (int w = 0; w < (1 << n); ++w) {
                    const int d0 = __builtin_popcount(static_cast<unsigned>(mx ^ w));
                    const int d1 =
                        __builtin_popcount(static_cast<unsigned>(mx ^ ((1 << n) - 1) ^ w));
                    CHECK_FALSE((d0 <= radius && d1 <= radius));
                }
            }
        }
    }
}

TEST_CASE("matching enumeration is a bijection in canonical order") {
    const int n = 3;
    std::set<std::vector<std::pair<int, int>>> seen;
    for (std::int64_t i = 0; i < matching_count(n); ++i) {
        const auto m = matching_from_index(n, i);
        REQUIRE(m.size() == 3);
        // Edges come out smallest-first and pairwise disjoint.
        std::set<int> used;
        for (auto [a, b] : m) {
            CHECK(a < b);
            CHECK(used.insert(a).second);
            CHECK(used.insert(b).second);
        }
        CHECK(m[0].first == 0);
        CHECK(seen.insert(m).second);
    }
}

TEST_CASE("conditional rows") {
    SUBCASE("product distribution: every row equals the Y marginal") {
        const auto d = JointDistribution::product({0.25, 0.75}, {0.2, 0.3, 0.5});
        for (int x = 0; x < 2; ++x) {
            const auto row = d.conditional_row(x);
            CHECK(row[0] == doctest::Approx(0.2).epsilon(1e-12));
            CHECK(row[1] == doctest::Approx(0.3).epsilon(1e-12));
            CHECK(row[2] == doctest::Approx(0.5).epsilon(1e-12));
        }
    }
    SUBCASE("point mass") {
        JointDistribution d(2, 2);
        d.at(0, 0) = 1.0;
        const auto row = d.conditional_row(0);
        CHECK(row[0] == 1.0);
        CHECK(row[1] == 0.0);
        CHECK_THROWS_AS(d.conditional_row(1), validation_error);
    }
    SUBCASE("row mass 0.4 renormalizes to (0.75, 0.25)") {
        JointDistribution d(2, 2);
        d.at(0, 0) = 0.3;
        d.at(0, 1) = 0.1;
        d.at(1, 0) = 0.6;
        const auto row = d.conditional_row(0);
        CHECK(row[0] == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(row[1] == doctest::Approx(0.25).epsilon(1e-12));
        double sum = row[0] + row[1];
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("is_product") {
    CHECK(JointDistribution::uniform(4, 4).is_product(1e-9));
    JointDistribution corr(2, 2);
    corr.at(0, 0) = corr.at(1, 1) = 0.5;
    CHECK_FALSE(corr.is_product(1e-9));

    auto d = JointDistribution::product({0.25, 0.75}, {0.4, 0.6});
    d.at(0, 0) += 2e-12;
    CHECK(d.is_product(1e-9)); // below tolerance
}

TEST_CASE("serialization round-trips bit for bit") {
    const auto inst = make_npm(2);
    const std::string fn_path = "npm2_fn_roundtrip.json";
    const std::string dist_path = "npm2_dist_roundtrip.json";
    save_function(inst.table, fn_path);
    save_distribution(inst.dist, dist_path);
    const auto f2 = load_function(fn_path);
    const auto d2 = load_distribution(dist_path);
    CHECK(f2.values == inst.table.values);
    CHECK(f2.x_size == inst.table.x_size);
    CHECK(f2.partial == inst.table.partial);
    REQUIRE(d2.p.size() == inst.dist.p.size());
    for (std::size_t i = 0; i < d2.p.size(); ++i)
        CHECK(d2.p[i] == inst.dist.p[i]); // exact, not approximate
    // Second save must produce identical bytes.
    CHECK(function_to_json(f2) == function_to_json(inst.table));
    CHECK(distribution_to_json(d2) == distribution_to_json(inst.dist));
    std::remove(fn_path.c_str());
    std::remove(dist_path.c_str());
}

TEST_CASE("loaders name the offending cell") {
    CHECK_THROWS_WITH_AS(
        function_from_json(R"({"x_size":1,"y_size":2,"z_size":2,"partial":false,"values":[[0,5]]})"),
        "function table: values[0][1] = 5 out of range [0,1]", validation_error);
    CHECK_THROWS_AS(
        function_from_json(R"({"x_size":1,"y_size":2,"z_size":2,"partial":false,"values":[[0,-1]]})"),
        validation_error); // star needs partial=true
    CHECK_NOTHROW(
        function_from_json(R"({"x_size":1,"y_size":2,"z_size":2,"partial":true,"values":[[0,-1]]})"));
    CHECK_THROWS_AS(
        distribution_from_json(R"({"x_size":1,"y_size":2,"p":[[0.5,0.6]]})"),
        validation_error); // mass off by more than 1e-9
    CHECK_THROWS_AS(
        distribution_from_json(R"({"x_size":1,"y_size":2,"p":[[-0.1,1.1]]})"),
        validation_error);
}

TEST_CASE("labeled joint files accept flat and nested p") {
    const auto flat = labeled_joint_from_json(R"({"axes":[2,2],"p":[0.25,0.25,0.25,0.25]})");
    const auto nested = labeled_joint_from_json(R"({"axes":[2,2],"p":[[0.25,0.25],[0.25,0.25]]})");
    CHECK(flat.probs == nested.probs);
    CHECK(flat.axes == std::vector<int>{2, 2});
    CHECK_THROWS_AS(labeled_joint_from_json(R"({"axes":[2,2],"p":[0.5,0.5]})"),
                    validation_error);
}

TEST_CASE("NPM correlation appears once the noise balls stop tiling the cube") {
    // For n = 3 the two radius-1 balls around Mx and its complement cover
    // all of w-space, so the distribution collapses to a product; from n = 4
    // the construction is genuinely correlated.
    CHECK(make_npm(3).dist.is_product(1e-9));
    const auto inst4 = make_npm(4);
    CHECK_FALSE(inst4.dist.is_product(1e-9));
    CHECK(mutual_information(inst4.dist) > 0.3);
}

TEST_CASE("NPM caps") {
    CHECK_THROWS_AS(make_npm(1), validation_error);
    CHECK_THROWS_AS(make_npm(7), cap_error); // 135135 * 128 > 1e6
}
