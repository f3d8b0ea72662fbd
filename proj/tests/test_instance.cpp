#include <cmath>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "qtsp/instance.hpp"
#include "qtsp/oracle.hpp"

using namespace qtsp;

TEST_SUITE("instance") {

TEST_CASE("load smallest legal instance") {
    TspInstance inst = load_instance(R"({"n": 2, "dist": [[0, 5], [5, 0]]})");
    CHECK(inst.n() == 2);
    CHECK(inst.dist(0, 1) == 5.0);
    CHECK_FALSE(inst.directed());
}

TEST_CASE("asymmetry sets the directed flag") {
    TspInstance inst = load_instance(R"({"n": 3, "dist": [[0,1,2],[9,0,3],[2,3,0]]})");
    CHECK(inst.directed());
}

TEST_CASE("invariant violations are rejected") {
    CHECK_THROWS_WITH_AS(
        load_instance(R"({"n": 4, "dist": [[0,1,1,1],[1,0,1,1],[1,1,1,1],[1,1,1,0]]})"),
        doctest::Contains("diagonal"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(load_instance(R"({"n": 2, "dist": [[0,-1],[1,0]]})"),
                         doctest::Contains("negative"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(load_instance(R"({"n": 3, "dist": [[0,1],[1,0]]})"),
                         doctest::Contains("non-square"), std::invalid_argument);
    CHECK_THROWS_AS(load_instance("{\"n\": 2, \"dist\""), std::invalid_argument);
    CHECK_THROWS_AS(load_instance(""), std::invalid_argument);
}

TEST_CASE("csv parsing and round trip") {
    TspInstance inst = load_instance("0,5\n5,0\n");
    CHECK(inst.n() == 2);
    CHECK(inst.dist(1, 0) == 5.0);
    TspInstance big = random_instance(5, 11, 0.0, 3.0);
    CHECK(load_instance(big.to_csv()) == big);
    CHECK_THROWS_AS(load_instance("0,1\n1,0,2\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_instance("0,x\nx,0\n"), std::invalid_argument);
}

TEST_CASE("json round trip is bit-exact") {
    for (std::uint64_t seed : {1, 2, 3}) {
        TspInstance inst = random_instance(7, seed, 0.1, 97.3);
        CHECK(load_instance(inst.to_json()) == inst);
    }
}

TEST_CASE("random instances are deterministic and ranged") {
    TspInstance a = random_instance(6, 1, 1.0, 10.0);
    TspInstance b = random_instance(6, 1, 1.0, 10.0);
    CHECK(a == b);
    CHECK_FALSE(a == random_instance(6, 2, 1.0, 10.0));

    TspInstance c = random_instance(5, 2, 0.0, 1.0);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            if (i == j) {
                CHECK(c.dist(i, j) == 0.0);
            } else {
                CHECK(c.dist(i, j) >= 0.0);
                CHECK(c.dist(i, j) <= 1.0);
            }
        }
    CHECK_THROWS_AS(random_instance(6, 1, 5.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(random_instance(6, 1, -1.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(random_instance(1, 1, 0.0, 5.0), std::invalid_argument);
}

TEST_CASE("random instance optimum respects the n*lo lower bound") {
    TspInstance inst = random_instance(8, 3, 1.0, 100.0);
    CHECK(brute_force(inst).cost >= 8.0);
}

TEST_CASE("min-max normalization, two-point case") {
    auto [norm, rec] = normalize_minmax(TspInstance(2, {0, 2, 4, 0}));
    CHECK(norm.dist(0, 1) == 0.0);
    CHECK(norm.dist(1, 0) == 1.0);
    CHECK(rec.d_min == 2.0);
    CHECK(rec.d_max == 4.0);
}

TEST_CASE("normalization fixed point") {
    TspInstance inst(3, {0, 0.0, 1.0, 0.5, 0, 0.25, 1.0, 0.3, 0});
    auto [norm, rec] = normalize_minmax(inst);
    CHECK(norm == inst);
    CHECK(rec.d_min == 0.0);
    CHECK(rec.d_max == 1.0);
}

TEST_CASE("normalized entries span [0,1] with the extremes hit once") {
    auto [norm, rec] = normalize_minmax(random_instance(6, 1, 1.0, 10.0));
    int zeros = 0, ones = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            if (i == j) continue;
            double d = norm.dist(i, j);
            CHECK(d >= 0.0);
            CHECK(d <= 1.0);
            if (d == 0.0) ++zeros;
            if (d == 1.0) ++ones;
        }
    // symmetric generation duplicates each extreme across the diagonal
    CHECK(zeros == 2);
    CHECK(ones == 2);
}

TEST_CASE("normalization is idempotent within 1e-12") {
    for (std::uint64_t seed : {1, 4, 9}) {
        auto [once, rec1] = normalize_minmax(random_instance(7, seed, 2.0, 50.0));
        auto [twice, rec2] = normalize_minmax(once);
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j)
                CHECK(std::abs(twice.dist(i, j) - once.dist(i, j)) <= 1e-12);
    }
}

TEST_CASE("constant off-diagonal matrices cannot be normalized") {
    CHECK_THROWS_WITH_AS(normalize_minmax(TspInstance(2, {0, 5, 5, 0})),
                         doctest::Contains("constant"), std::invalid_argument);
}

TEST_CASE("path counts match the published table") {
    CHECK(path_count(3) == 1);
    CHECK(path_count(5) == 12);
    CHECK(u128_to_string(path_count(10)) == "181440");
    CHECK(u128_to_string(path_count(20)) == "60822550204416000");
    CHECK(u128_to_string(path_count(25)) == "310224200866619719680000");
}

TEST_CASE("path count recurrence and overflow reporting") {
    for (int n = 3; n <= 33; ++n) CHECK(path_count(n + 1) == path_count(n) * (unsigned)n);
    CHECK_THROWS_AS(path_count(2), std::invalid_argument);
    CHECK_THROWS_AS(path_count(60), std::overflow_error);
}

TEST_CASE("denormalization inverts the cost map") {
    TspInstance inst = random_instance(5, 8, 3.0, 12.0);
    auto [norm, rec] = normalize_minmax(inst);
    Tour tour{{0, 2, 1, 4, 3}};
    double raw = tour_cost(inst, tour);
    double mapped = rec.denormalize_cost(tour_cost(norm, tour), 5);
    CHECK(std::abs(raw - mapped) <= 1e-9);
}

}  // TEST_SUITE
