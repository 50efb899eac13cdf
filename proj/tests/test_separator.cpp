#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "widthlab/separator.hpp"

using namespace widthlab;

namespace {

FiniteMetricSpace points_on_line(const std::vector<double>& xs, double h) {
    std::vector<std::array<double, 3>> c;
    for (double x : xs) c.push_back({x, 0, 0});
    return FiniteMetricSpace::from_coordinates(MetricKind::euclidean, c, h);
}

FiniteMetricSpace line_net(int last) {
    std::vector<double> xs;
    for (int i = 0; i <= last; ++i) xs.push_back(i);
    return points_on_line(xs, 1.0);
}

FiniteMetricSpace grid(int side) {
    std::vector<std::array<double, 3>> c;
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) c.push_back({double(i), double(j), 0});
    return FiniteMetricSpace::from_coordinates(MetricKind::euclidean, c, 1.0);
}

// Partition, disjointness and diameter checks straight from the definition.
void check_valid(const FiniteMetricSpace& s, const SeparatorResult& r, double s_scale) {
    auto again = is_separating(s, r.z, r.d, s_scale);
    CHECK(again.ok);
    CHECK(again.pieces == r.pieces);
    std::vector<int> seen(s.size(), 0);
    for (PointId p : r.z) ++seen[p];
    for (const auto& piece : r.pieces) {
        CHECK(diameter(s, piece) <= r.d);
        for (PointId p : piece) ++seen[p];
    }
    for (int k : seen) CHECK(k == 1);
}

SeparatorResult wrap(const FiniteMetricSpace& s, PointSet z, double d, double scale, int n) {
    auto check = is_separating(s, z, d, scale);
    REQUIRE(check.ok);
    SeparatorResult r;
    r.content = greedy_content(s, z, n - 1, kUnrestricted);
    r.z = std::move(z);
    r.pieces = check.pieces;
    r.d = d;
    r.scale_s = scale;
    return r;
}

}  // namespace

TEST_SUITE("separator") {

TEST_CASE("separation examples") {
    auto s = line_net(10);
    auto all = is_separating(s, s.all_points(), 1, 2);
    CHECK(all.ok);
    CHECK(all.pieces.empty());

    auto cut = is_separating(s, {5}, 4, 2);
    REQUIRE(cut.ok);
    REQUIRE(cut.pieces.size() == 2);
    CHECK(cut.pieces[0] == PointSet{0, 1, 2, 3, 4});
    CHECK(cut.pieces[1] == PointSet{6, 7, 8, 9, 10});

    auto tight = is_separating(s, {5}, 3, 2);
    CHECK_FALSE(tight.ok);
    CHECK(tight.oversized_diam == 4.0);
    CHECK(tight.oversized.size() == 5);
}

TEST_CASE("initial separator") {
    auto small = line_net(8);
    auto one = initial_separator(small, 10, 2, kUnrestricted);
    CHECK(one.z.empty());
    CHECK(one.pieces.size() == 1);

    auto line = line_net(100);
    auto r = initial_separator(line, 10, 2, kUnrestricted);
    check_valid(line, r, r.scale_s);
    CHECK(!r.z.empty());
    // cuts are shells of width s = 2: runs of at most two consecutive points
    std::size_t run = 1;
    for (std::size_t i = 1; i < r.z.size(); ++i) {
        run = r.z[i] == r.z[i - 1] + 1 ? run + 1 : 1;
        CHECK(run <= 2);
    }

    auto g = grid(30);
    auto rg = initial_separator(g, 10, 2, kUnrestricted);
    check_valid(g, rg, rg.scale_s);
    CHECK(rg.pieces.size() > 1);

    CHECK_THROWS_AS(initial_separator(line, 3, 2, kUnrestricted), Error);
}

TEST_CASE("swap with nothing to remove") {
    std::vector<double> xs;
    for (int i = 0; i < 6; ++i) xs.push_back(i);
    for (int i = 0; i < 6; ++i) xs.push_back(100 + i);
    auto s = points_on_line(xs, 1.0);
    auto cur = wrap(s, {0, 1, 2, 3, 4, 5}, 8, 2, 2);
    auto sw = improve_separator(s, cur, 8, 1000, 2, kUnrestricted);
    CHECK_FALSE(sw.improved);
    CHECK(sw.result.z == cur.z);
}

TEST_CASE("swap removes a dense blob") {
    std::vector<double> xs;
    for (int i = 0; i < 6; ++i) xs.push_back(i);
    for (int i = 0; i < 6; ++i) xs.push_back(100 + i);
    auto s = points_on_line(xs, 1.0);
    auto cur = wrap(s, {0, 1, 2, 3, 4, 5}, 8, 2, 2);
    REQUIRE(cur.content.value > 0);
    auto sw = improve_separator(s, cur, 0, 1000, 2, kUnrestricted);
    REQUIRE(sw.improved);
    CHECK(sw.result.z.empty());
    CHECK(sw.result.content.value < cur.content.value);
    CHECK(sw.r >= 10);
    check_valid(s, sw.result, 2);
}

TEST_CASE("swap that would leave an oversized piece") {
    std::vector<double> xs;
    for (int i = 0; i < 10; ++i) xs.push_back(i);
    for (int i = 0; i < 6; ++i) xs.push_back(100 + i);
    auto s = points_on_line(xs, 1.0);
    PointSet blob;
    for (PointId p = 0; p < 10; ++p) blob.push_back(p);
    auto cur = wrap(s, blob, 8, 2, 2);
    auto sw = improve_separator(s, cur, 0, 1000, 2, kUnrestricted);
    CHECK_FALSE(sw.improved);
    CHECK(sw.reason == "swap breaks separation");
    CHECK(sw.result.z == cur.z);
}

TEST_CASE("minimal separator on tiny spaces is within delta of exhaustive") {
    std::mt19937_64 rng(31);
    const double delta = 0.01;
    for (int trial = 0; trial < 12; ++trial) {
        auto m = oracle::random_integer_metric(6, rng, 4);
        auto s = FiniteMetricSpace::from_distance_matrix(m, 0.5);
        for (double d : {1.0, 2.0, 4.0}) {
            SeparatorConfig cfg;
            cfg.scale_s = 1.5;
            auto r = minimal_separator(s, d, 2, kUnrestricted, delta, cfg);
            check_valid(s, r, 1.5);
            auto best = exhaustive_min_separator(s, d, 2, kUnrestricted, 1.5);
            CHECK(r.content.value - best.b <= delta + 1e-12);
            REQUIRE(r.gap_bound.has_value());
            CHECK(*r.gap_bound <= delta + 1e-12);
        }
    }
}

TEST_CASE("exhaustive oracle agrees with brute force") {
    // b(D) recomputed here from scratch over all 2^6 subsets
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 5; ++trial) {
        auto m = oracle::random_integer_metric(6, rng, 4);
        auto s = FiniteMetricSpace::from_distance_matrix(m, 0.5);
        double best = INFINITY;
        for (unsigned mask = 0; mask < 64; ++mask) {
            PointSet z;
            for (PointId p = 0; p < 6; ++p)
                if (mask >> p & 1) z.push_back(p);
            if (!is_separating(s, z, 2.0, 1.5).ok) continue;
            best = std::min(best, oracle::min_cover_scaled(m, z, 1, 0.5, kUnrestricted, 2.0) / 2.0);
        }
        CHECK(exhaustive_min_separator(s, 2.0, 2, kUnrestricted, 1.5).b == best);
    }
}

TEST_CASE("minimal separator never exceeds the initial one") {
    auto line = line_net(100);
    auto init = initial_separator(line, 10, 2, kUnrestricted);
    auto best = minimal_separator(line, 10, 2, kUnrestricted, 0.01);
    check_valid(line, best, best.scale_s);
    CHECK(best.content.value <= init.content.value);

    auto s = line_net(8);
    auto r = minimal_separator(s, 20, 2, kUnrestricted, 0.1);
    CHECK(r.z.empty());
    CHECK(r.content.value == 0.0);
}

TEST_CASE("grid separator is locally stable") {
    auto g = grid(30);
    const double big_r = 40, d = big_r / 4, delta = 0.5;
    auto init = initial_separator(g, d, 2, kUnrestricted);
    auto r = minimal_separator(g, d, 2, kUnrestricted, delta);
    check_valid(g, r, r.scale_s);
    CHECK(r.content.value <= init.content.value);
    CHECK_FALSE(r.budget_exhausted);
    const double tol = delta / g.size();
    for (PointId x = 0; x < g.size(); ++x) CHECK_FALSE(improve_separator(g, r, x, 4 * d, 2, kUnrestricted, tol).improved);
}

TEST_CASE("localized smallness report") {
    auto line = line_net(100);
    auto r = initial_separator(line, 10, 2, kUnrestricted);
    auto rep = localized_smallness(line, r.z, 3, 1, kUnrestricted, 100);
    CHECK(rep.pass);
    auto bad = localized_smallness(line, line.all_points(), 3, 1, kUnrestricted, 0.5);
    CHECK_FALSE(bad.pass);
    CHECK(bad.violations > 0);
}

}
