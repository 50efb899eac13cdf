#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "widthlab/content.hpp"

using namespace widthlab;

namespace {

FiniteMetricSpace line3(double h) {
    return FiniteMetricSpace::from_distance_matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, h);
}

double scaled(double v, int n, double scale) {
    for (int k = 0; k < n; ++k) v *= scale;
    return v;
}

}  // namespace

TEST_SUITE("content") {

TEST_CASE("verify_cover") {
    auto s = FiniteMetricSpace::from_distance_matrix({{0, 5}, {5, 0}}, 1.0);
    ContentEstimate e;
    e.cover = {{0, 1.0}};
    CHECK(verify_cover(s, {0}, e));
    CHECK_FALSE(verify_cover(s, {0, 1}, e));
    e.cover = {{0, 0.5}};  // below the mesh floor
    CHECK_FALSE(verify_cover(s, {0}, e));
}

TEST_CASE("small exact values") {
    auto one = FiniteMetricSpace::from_distance_matrix({{0}}, 0.5);
    auto e = exact_content(one, {0}, 1, kUnrestricted);
    CHECK(e.value == 0.5);
    REQUIRE(e.cover.size() == 1);
    CHECK(e.cover[0] == CoverBall{0, 0.5});

    auto s = line3(0.5);
    auto free = exact_content(s, {0, 1, 2}, 1, kUnrestricted);
    CHECK(free.value == 1.0);
    REQUIRE(free.cover.size() == 1);
    CHECK(free.cover[0] == CoverBall{1, 1.0});

    auto capped = exact_content(s, {0, 1, 2}, 1, 0.6);
    CHECK(capped.value == 1.5);
    CHECK(capped.cover.size() == 3);

    CHECK(exact_content(s, {}, 2, kUnrestricted).value == 0.0);
    CHECK_THROWS_AS(exact_content(s, {0}, 1, 0.4), InfeasibleError);
}

TEST_CASE("greedy examples") {
    auto one = FiniteMetricSpace::from_distance_matrix({{0}}, 0.5);
    CHECK(greedy_content(one, {0}, 2, kUnrestricted).value == 0.25);
    auto g = greedy_content(line3(0.5), {0, 1, 2}, 1, kUnrestricted);
    CHECK(g.value == 1.0);
    REQUIRE(g.cover.size() == 1);
    CHECK(g.cover[0] == CoverBall{1, 1.0});
}

TEST_CASE("exact solver matches the subset oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n_pts = 5 + trial % 5;
        auto m = oracle::random_integer_metric(n_pts, rng);
        auto s = FiniteMetricSpace::from_distance_matrix(m, 0.5);
        auto target = s.all_points();
        for (int n = 1; n <= 3; ++n)
            for (double zeta : {kUnrestricted, 2.0}) {
                auto e = exact_content(s, target, n, zeta);
                CHECK(verify_cover(s, target, e));
                auto ref = oracle::min_cover_scaled(m, target, n, 0.5, zeta, 2.0);
                CHECK(scaled(e.value, n, 2.0) == double(ref));
            }
    }
}

TEST_CASE("greedy is an upper bound on exact") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = oracle::random_integer_metric(12, rng);
        auto s = FiniteMetricSpace::from_distance_matrix(m, 0.5);
        for (int n = 1; n <= 2; ++n) {
            auto g = greedy_content(s, s.all_points(), n, kUnrestricted);
            auto e = exact_content(s, s.all_points(), n, kUnrestricted);
            CHECK(verify_cover(s, s.all_points(), g));
            CHECK(g.value >= e.value);
        }
    }
}

TEST_CASE("monotonicity properties") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = oracle::random_integer_metric(8, rng);
        auto s = FiniteMetricSpace::from_distance_matrix(m, 0.5);
        PointSet big = s.all_points(), small{0, 2, 5};
        for (int n = 1; n <= 2; ++n) {
            CHECK(exact_content(s, small, n, kUnrestricted).value <= exact_content(s, big, n, kUnrestricted).value);
            double free = exact_content(s, big, n, kUnrestricted).value;
            double prev = free;
            for (double zeta : {8.0, 4.0, 2.0, 1.0, 0.5}) {
                double v = exact_content(s, big, n, zeta).value;
                CHECK(v >= prev);
                prev = v;
            }
            // target inside ball(x, zeta): the cap does not matter
            PointId x = 0;
            double zeta = 3.0;
            PointSet inside = ball(s, x, zeta);
            CHECK(exact_content(s, inside, n, zeta).value == exact_content(s, inside, n, kUnrestricted).value);
        }
    }
}

TEST_CASE("single ball bound") {
    auto s = line3(0.5);
    CHECK(single_ball_bound(s, 0, 0, 2) == 0.25);
    CHECK(single_ball_bound(s, 0, 3, 2) == 9.0);

    std::vector<std::array<double, 3>> grid;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) grid.push_back({double(i), double(j), 0});
    auto g = FiniteMetricSpace::from_coordinates(MetricKind::euclidean, grid, 1.0);
    auto b = ball(g, 12, 2.0);
    CHECK(exact_content(g, b, 2, kUnrestricted).value <= 4.0);
}

TEST_CASE("exact budget") {
    std::vector<std::array<double, 3>> pts;
    for (int i = 0; i < 20; ++i) pts.push_back({double(i), 0, 0});
    auto s = FiniteMetricSpace::from_coordinates(MetricKind::euclidean, pts, 1.0);
    CHECK_THROWS_AS(exact_content(s, s.all_points(), 1, kUnrestricted), BudgetError);
    CHECK(auto_content(s, s.all_points(), 1, kUnrestricted).method == ContentMethod::greedy);
}

}
