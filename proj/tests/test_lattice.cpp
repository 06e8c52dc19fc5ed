#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "rsgraph/lattice.hpp"

using namespace rsg;

TEST_CASE("ball volumes in low dimensions") {
    CHECK(ball_volume(1, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ball_volume(2, 1.0) == doctest::Approx(3.14159265358979).epsilon(1e-12));
    CHECK(ball_volume(3, 1.0) == doctest::Approx(4.0 * 3.14159265358979 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(ball_volume(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ball_volume(2, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ball_volume(2, 0.0), std::invalid_argument);
}

TEST_CASE("radius_for_volume inverts ball_volume") {
    CHECK(radius_for_volume(2, 3.14159265358979323846) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(radius_for_volume(1, 5.0) == doctest::Approx(2.5).epsilon(1e-12));
    // dim 4: closed form (2 V / pi^2)^{1/4}
    const double expected = std::pow(2.0e4 / (3.14159265358979323846 * 3.14159265358979323846), 0.25);
    CHECK(radius_for_volume(4, 1.0e4) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(radius_for_volume(4, 1.0e4) == doctest::Approx(6.70938266965).epsilon(1e-9));
    for (int dim = 1; dim <= 12; ++dim) {
        const double v = 7.5 + 13.0 * dim;
        const double r = radius_for_volume(dim, v);
        CHECK(ball_volume(dim, r) == doctest::Approx(v).epsilon(1e-10));
    }
    CHECK_THROWS_AS(radius_for_volume(3, 0.0), std::invalid_argument);
}

TEST_CASE("enumerate_ball pinned examples") {
    SUBCASE("unit disk") {
        const PointSet s = enumerate_ball(BallSpec::origin(2, 1.0));
        REQUIRE(s.size() == 5);
        CHECK(s.contains(LatticePoint{0, 0}));
        CHECK(s.contains(LatticePoint{1, 0}));
        CHECK(s.contains(LatticePoint{-1, 0}));
        CHECK(s.contains(LatticePoint{0, 1}));
        CHECK(s.contains(LatticePoint{0, -1}));
    }
    SUBCASE("interval radius^2 = 25/4") {
        const PointSet s = enumerate_ball(BallSpec::origin(1, 2.5));
        REQUIRE(s.size() == 5);
        for (Coord v = -2; v <= 2; ++v) CHECK(s.contains(LatticePoint{v}));
    }
    SUBCASE("degenerate ball at an integer center") {
        const PointSet s = enumerate_ball(BallSpec::from_real(3, 0.0, {2.0, -1.0, 5.0}));
        REQUIRE(s.size() == 1);
        CHECK(s.contains(LatticePoint{2, -1, 5}));
    }
    SUBCASE("budget error names the bound") {
        CHECK_THROWS_WITH_AS(enumerate_ball(BallSpec::origin(3, 100.0), 1000),
                             doctest::Contains("1000"), BudgetError);
    }
}

TEST_CASE("enumerate_ball equals the box-scan oracle") {
    Rng rng(20240601);
    for (int dim = 1; dim <= 4; ++dim) {
        for (int rep = 0; rep < 8; ++rep) {
            const double radius = 0.5 + 5.5 * rng.next_unit();
            std::vector<double> center(dim);
            for (auto& c : center) c = -3.0 + 6.0 * rng.next_unit();
            const BallSpec spec = BallSpec::from_real(dim, radius, center);
            const PointSet got = enumerate_ball(spec);
            const auto want = oracle::ball_points(spec);
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < want.size(); ++i) CHECK(got.point_vec(i) == want[i]);
        }
    }
}

TEST_CASE("enumerate_ball monotone in radius and symmetric at the origin") {
    Rng rng(77);
    for (int rep = 0; rep < 12; ++rep) {
        const int dim = 1 + static_cast<int>(rng.next_u64() % 3);
        std::vector<double> center(dim);
        for (auto& c : center) c = -2.0 + 4.0 * rng.next_unit();
        const double r1 = 4.0 * rng.next_unit();
        const double r2 = r1 + 2.0 * rng.next_unit();
        const PointSet small = enumerate_ball(BallSpec::from_real(dim, r1, center));
        const PointSet big = enumerate_ball(BallSpec::from_real(dim, r2, center));
        for (std::size_t i = 0; i < small.size(); ++i) CHECK(big.contains(small.point(i)));

        const PointSet sym = enumerate_ball(BallSpec::origin(dim, r2));
        for (std::size_t i = 0; i < sym.size(); ++i) {
            LatticePoint neg = sym.point_vec(i);
            for (auto& v : neg) v = -v;
            CHECK(sym.contains(neg));
        }
    }
}

TEST_CASE("count_additive_triples pinned examples") {
    const PointSet zero(1, {{0}});
    CHECK(count_additive_triples(zero, zero, zero) == 1);

    const PointSet w(1, {{-1}, {0}, {1}});
    CHECK(count_additive_triples(w, w, w) == 7);

    const PointSet empty_set = PointSet::from_sorted_flat(1, {});
    CHECK(count_additive_triples(w, w, empty_set) == 0);

    const PointSet two(2, {{0, 0}});
    CHECK_THROWS_AS(count_additive_triples(w, two, w), std::invalid_argument);
    CHECK_THROWS_AS(count_additive_triples(w, w, [](const Coord*) { return true; }, 5),
                    BudgetError);
}

TEST_CASE("count_additive_triples is symmetric in X and Y") {
    Rng rng(5150);
    for (int rep = 0; rep < 10; ++rep) {
        const int dim = 1 + static_cast<int>(rng.next_u64() % 2);
        auto random_set = [&](std::size_t count) {
            std::vector<LatticePoint> pts;
            for (std::size_t i = 0; i < count; ++i) {
                LatticePoint p(dim);
                for (auto& v : p) v = static_cast<Coord>(rng.next_u64() % 9) - 4;
                pts.push_back(std::move(p));
            }
            return PointSet(dim, std::move(pts));
        };
        const PointSet x = random_set(12), y = random_set(15), z = random_set(20);
        CHECK(count_additive_triples(x, y, z) == count_additive_triples(y, x, z));
    }
}

TEST_CASE("count matches collect and is worker-count independent") {
    const BallSpec b = BallSpec::origin(2, 3.25);
    const PointSet pts = enumerate_ball(b);
    const PointSet z = enumerate_ball(BallSpec::origin(2, 2.5));
    const std::int64_t c1 = count_additive_triples(pts, pts, z, kDefaultPairBudget, 1);
    const std::int64_t c4 = count_additive_triples(pts, pts, z, kDefaultPairBudget, 4);
    CHECK(c1 == c4);
    CHECK(c1 == static_cast<std::int64_t>(collect_additive_pairs(pts, pts, z).size()));
}

TEST_CASE("find_good_shift basics") {
    const BallSpec b = BallSpec::origin(1, 2.5);
    const ShiftProblem problem{b, b, b};
    SUBCASE("target zero is always achieved") {
        const ShiftResult r = find_good_shift(problem, 0.0, 8, 42);
        CHECK(r.achieved);
        CHECK(r.count >= 0);
        CHECK(r.shift_num.size() == 2);
        for (auto s : r.shift_num) {
            CHECK(s >= 0);
            CHECK(s < kShiftScale);
        }
    }
    SUBCASE("count is reproducible by an independent recount") {
        const ShiftResult r = find_good_shift(problem, 10.0, 16, 7);
        CHECK(pair_count_for_shift(problem, r.shift_num) == r.count);
    }
    SUBCASE("deterministic given seed, any worker count") {
        const ShiftResult a = find_good_shift(problem, 0.0, 32, 11, kDefaultPointBudget,
                                              kDefaultPairBudget, 1);
        const ShiftResult c = find_good_shift(problem, 0.0, 32, 11, kDefaultPointBudget,
                                              kDefaultPairBudget, 5);
        CHECK(a.shift_num == c.shift_num);
        CHECK(a.count == c.count);
        CHECK(a.mean_count == c.mean_count);
    }
    SUBCASE("zero trials rejected") {
        CHECK_THROWS_AS(find_good_shift(problem, 0.0, 0, 1), std::invalid_argument);
    }
}

TEST_CASE("shifted interval of length 2.5 captures 2 or 3 points, and 3 occurs") {
    // one-ball variant: [t, t+2.5] as a ball of radius 1.25 centered at t+1.25
    const BallSpec b = BallSpec::from_real(1, 1.25, {1.25});
    Rng rng(99);
    bool seen_three = false;
    for (int trial = 0; trial < 64; ++trial) {
        const std::vector<std::int64_t> t{rng.next_grid20()};
        const std::size_t count = enumerate_ball(b.shifted(t)).size();
        CHECK(count >= 2);
        CHECK(count <= 3);
        if (count == 3) seen_three = true;
    }
    CHECK(seen_three);
}

TEST_CASE("shift-averaged pair counts concentrate at the product-set measure") {
    // D = 1, three balls of radius 2.5: mu(S) = (2r)^2 * 3/4 = 18.75
    const BallSpec b = BallSpec::origin(1, 2.5);
    const ShiftProblem problem{b, b, b};
    const double mu = 18.75;
    const ShiftResult r = find_good_shift(problem, mu, 10000, 2024);
    const double se = r.stddev_count / std::sqrt(static_cast<double>(r.trials));
    CHECK(std::abs(r.mean_count - mu) <= 4.0 * se + 1e-3);
    CHECK(r.stddev_count > 0.0);
}

TEST_CASE("PointSet invariants") {
    PointSet s(2, {{1, 2}, {1, 2}, {0, 0}, {3, -1}});
    CHECK(s.size() == 3);  // duplicate removed
    CHECK(s.point_vec(0) == LatticePoint{0, 0});
    CHECK(s.point_vec(1) == LatticePoint{1, 2});
    CHECK(s.point_vec(2) == LatticePoint{3, -1});
    CHECK(s.contains(LatticePoint{3, -1}));
    CHECK_FALSE(s.contains(LatticePoint{2, 2}));
    CHECK_THROWS_AS(PointSet(2, {{1}}), std::invalid_argument);

    const PointSet t = s.translated({10, 20});
    CHECK(t.contains(LatticePoint{11, 22}));
    CHECK(t.coordinate_min() == LatticePoint{10, 19});
    CHECK(t.coordinate_max() == LatticePoint{13, 22});

    const PointSet head = s.slice(0, 2);
    CHECK(head.size() == 2);
    CHECK(head.contains(LatticePoint{0, 0}));
    CHECK_FALSE(head.contains(LatticePoint{3, -1}));
}

TEST_CASE("BallSpec stores exact dyadic data") {
    const BallSpec b = BallSpec::from_real(1, 2.5, {0.0});
    CHECK(b.radius_sq_num() == static_cast<int128>(25) * (std::int64_t{1} << 38));  // 25/4 * 2^40
    CHECK_THROWS_AS(BallSpec(1, -1, {0}), std::invalid_argument);
    CHECK_THROWS_AS(BallSpec(2, 1, {0}), std::invalid_argument);
}
