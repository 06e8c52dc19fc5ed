#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "rsgraph/additive.hpp"

using namespace rsg;

namespace {

CornerSet corner_set_1d(std::initializer_list<std::pair<Coord, Coord>> pairs) {
    std::vector<std::pair<LatticePoint, LatticePoint>> v;
    for (const auto& [x, y] : pairs) v.push_back({{x}, {y}});
    return CornerSet(1, std::move(v));
}

// the 7 pairs over {-1,0,1}^2 whose sum stays in {-1,0,1}
CornerSet box_pairs_1d() {
    std::vector<std::pair<LatticePoint, LatticePoint>> v;
    for (Coord x = -1; x <= 1; ++x)
        for (Coord y = -1; y <= 1; ++y)
            if (x + y >= -1 && x + y <= 1) v.push_back({{x}, {y}});
    return CornerSet(1, std::move(v));
}

}  // namespace

TEST_CASE("norm_color computes the exact squared distance") {
    CHECK(norm_color(LatticePoint{3, 1}, LatticePoint{1, 2}) == 5);
    CHECK(norm_color(LatticePoint{7}, LatticePoint{7}) == 0);
    CHECK(norm_color(LatticePoint{-4, 0, 2}, LatticePoint{1, 1, 1}) == 27);
    CHECK_THROWS_AS(norm_color(LatticePoint{1}, LatticePoint{1, 2}), std::invalid_argument);
    // grid range: pairs from ([M+1]^D)^2 color into {0,...,D M^2}
    const int M = 3, D = 2;
    for (Coord x0 = 1; x0 <= M + 1; ++x0)
        for (Coord x1 = 1; x1 <= M + 1; ++x1)
            for (Coord y0 = 1; y0 <= M + 1; ++y0)
                for (Coord y1 = 1; y1 <= M + 1; ++y1) {
                    const std::int64_t c = norm_color(LatticePoint{x0, x1}, LatticePoint{y0, y1});
                    CHECK(c >= 0);
                    CHECK(c <= D * M * M);
                }
}

TEST_CASE("largest_cornerfree_class on pinned inputs") {
    SUBCASE("singleton") {
        const auto ext = largest_cornerfree_class(corner_set_1d({{1, 1}}));
        CHECK(ext.color == 0);
        CHECK(ext.cornerfree.size() == 1);
        CHECK(ext.classes_present == 1);
    }
    SUBCASE("the 7 box pairs") {
        // colors (x-y)^2 over the 7 pairs: 0 -> {(0,0)}, 1 -> four pairs,
        // 4 -> {(-1,1),(1,-1)}; brute enumeration confirms below
        const CornerSet a0 = box_pairs_1d();
        std::map<std::int64_t, std::int64_t> hist;
        for (std::size_t i = 0; i < a0.size(); ++i)
            ++hist[norm_color(a0.pair(i).first, a0.pair(i).second)];
        REQUIRE(hist.size() == 3);
        CHECK(hist[0] == 1);
        CHECK(hist[1] == 4);
        CHECK(hist[4] == 2);

        const auto ext = largest_cornerfree_class(a0);
        CHECK(ext.classes_present == 3);
        CHECK(ext.color == 1);
        CHECK(ext.cornerfree.size() == 4);
        CHECK_FALSE(is_corner_free(ext.cornerfree).has_value());
        CHECK_FALSE(check_triple_condition(ext.cornerfree).has_value());
    }
    SUBCASE("empty input rejected") {
        CHECK_THROWS_AS(largest_cornerfree_class(CornerSet(1, {})), std::invalid_argument);
    }
}

TEST_CASE("extraction soundness and exact pigeonhole on random inputs") {
    Rng rng(314159);
    for (int rep = 0; rep < 40; ++rep) {
        const int dim = 1 + static_cast<int>(rng.next_u64() % 2);
        std::vector<std::pair<LatticePoint, LatticePoint>> pairs;
        const std::size_t count = 2 + rng.next_u64() % 50;
        for (std::size_t i = 0; i < count; ++i) {
            LatticePoint x(dim), y(dim);
            for (auto& v : x) v = static_cast<Coord>(rng.next_u64() % 7);
            for (auto& v : y) v = static_cast<Coord>(rng.next_u64() % 7);
            pairs.push_back({x, y});
        }
        const CornerSet a0(dim, pairs);
        const auto ext = largest_cornerfree_class(a0);
        // partition: sizes sum to |A0|; pigeonhole exactly
        std::map<std::int64_t, std::int64_t> hist;
        for (std::size_t i = 0; i < a0.size(); ++i)
            ++hist[norm_color(a0.pair(i).first, a0.pair(i).second)];
        std::int64_t total = 0;
        for (const auto& [c, k] : hist) total += k;
        CHECK(total == static_cast<std::int64_t>(a0.size()));
        CHECK(static_cast<std::int64_t>(hist.size()) == ext.classes_present);
        CHECK(static_cast<std::int64_t>(ext.cornerfree.size()) * ext.classes_present >=
              static_cast<std::int64_t>(a0.size()));
        // extraction soundness: the class is corner-free by both checkers
        CHECK_FALSE(is_corner_free(ext.cornerfree).has_value());
        CHECK_FALSE(check_triple_condition(ext.cornerfree, TripleCheckMode::brute,
                                           std::int64_t{200} * 200 * 200)
                        .has_value());
    }
}

TEST_CASE("norm coloring admits no monochromatic corner on small grids") {
    // exhaustive over D = 2, M <= 3: for every grid pair g and nonzero d with
    // the corner staying in the grid, the three colors never coincide
    for (int M = 1; M <= 3; ++M) {
        for (Coord x0 = 1; x0 <= M + 1; ++x0)
            for (Coord x1 = 1; x1 <= M + 1; ++x1)
                for (Coord y0 = 1; y0 <= M + 1; ++y0)
                    for (Coord y1 = 1; y1 <= M + 1; ++y1)
                        for (Coord d0 = -M; d0 <= M; ++d0)
                            for (Coord d1 = -M; d1 <= M; ++d1) {
                                if (d0 == 0 && d1 == 0) continue;
                                const Coord xd0 = x0 + d0, xd1 = x1 + d1;
                                const Coord yd0 = y0 + d0, yd1 = y1 + d1;
                                if (xd0 < 1 || xd0 > M + 1 || xd1 < 1 || xd1 > M + 1) continue;
                                if (yd0 < 1 || yd0 > M + 1 || yd1 < 1 || yd1 > M + 1) continue;
                                const LatticePoint x{x0, x1}, y{y0, y1};
                                const std::int64_t c0 = norm_color(x, y);
                                const std::int64_t c1 = norm_color(LatticePoint{xd0, xd1}, y);
                                const std::int64_t c2 = norm_color(x, LatticePoint{yd0, yd1});
                                CHECK((c0 != c1 || c1 != c2));
                            }
    }
}

TEST_CASE("is_corner_free pinned examples") {
    SUBCASE("explicit corner") {
        const auto w = is_corner_free(corner_set_1d({{1, 1}, {2, 1}, {1, 2}}));
        REQUIRE(w.has_value());
        CHECK(w->kind == WitnessKind::corner);
        CHECK(w->points[0] == LatticePoint{1});
        CHECK(w->points[1] == LatticePoint{1});
        CHECK(w->difference == LatticePoint{1});
    }
    SUBCASE("corner-free triple") {
        CHECK_FALSE(is_corner_free(corner_set_1d({{1, 1}, {1, 2}, {2, 2}})).has_value());
    }
    SUBCASE("singleton") { CHECK_FALSE(is_corner_free(corner_set_1d({{5, 9}})).has_value()); }
}

TEST_CASE("is_corner_free agrees with the cubic oracle and yields checkable witnesses") {
    Rng rng(8675309);
    for (int rep = 0; rep < 60; ++rep) {
        const int dim = 1 + static_cast<int>(rng.next_u64() % 2);
        std::vector<std::pair<LatticePoint, LatticePoint>> pairs;
        const std::size_t count = 1 + rng.next_u64() % 60;
        for (std::size_t i = 0; i < count; ++i) {
            LatticePoint x(dim), y(dim);
            for (auto& v : x) v = static_cast<Coord>(rng.next_u64() % 5);
            for (auto& v : y) v = static_cast<Coord>(rng.next_u64() % 5);
            pairs.push_back({x, y});
        }
        const CornerSet a(dim, pairs);
        const auto w = is_corner_free(a);
        CHECK(w.has_value() == oracle::has_corner(a));
        if (w) {
            // re-evaluate the defining equations on the witness elements
            const LatticePoint& x = w->points[0];
            const LatticePoint& y = w->points[1];
            const LatticePoint& d = w->difference;
            bool zero = true;
            LatticePoint xd(dim), yd(dim);
            for (int k = 0; k < dim; ++k) {
                if (d[k] != 0) zero = false;
                xd[k] = x[k] + d[k];
                yd[k] = y[k] + d[k];
            }
            CHECK_FALSE(zero);
            CHECK(a.contains(x, y));
            CHECK(a.contains(xd, y));
            CHECK(a.contains(x, yd));
        }
    }
}

TEST_CASE("is_3ap_free pinned examples") {
    SUBCASE("explicit progression") {
        const auto w = is_3ap_free(PointSet(1, {{1}, {2}, {3}}));
        REQUIRE(w.has_value());
        CHECK(w->kind == WitnessKind::three_ap);
        CHECK(w->points[1] == LatticePoint{2});
        CHECK(w->difference == LatticePoint{1});
    }
    SUBCASE("progression-free set") {
        CHECK_FALSE(is_3ap_free(PointSet(1, {{1}, {2}, {4}, {5}})).has_value());
    }
    SUBCASE("tiny sets") {
        CHECK_FALSE(is_3ap_free(PointSet(1, {{3}, {9}})).has_value());
        CHECK_FALSE(is_3ap_free(PointSet::from_sorted_flat(1, {})).has_value());
    }
    SUBCASE("random agreement with the oracle") {
        Rng rng(42424242);
        for (int rep = 0; rep < 60; ++rep) {
            std::vector<LatticePoint> pts;
            const std::size_t count = 1 + rng.next_u64() % 14;
            for (std::size_t i = 0; i < count; ++i)
                pts.push_back({static_cast<std::int64_t>(rng.next_u64() % 30)});
            const PointSet w(1, pts);
            std::vector<std::int64_t> dedup;
            for (std::size_t i = 0; i < w.size(); ++i) dedup.push_back(w.point(i)[0]);
            CHECK(is_3ap_free(w).has_value() == oracle::has_3ap(dedup));
        }
    }
}

TEST_CASE("check_triple_condition pinned examples") {
    SUBCASE("diagonal-only set") {
        const CornerSet a = corner_set_1d({{1, 1}, {2, 2}});
        CHECK_FALSE(check_triple_condition(a, TripleCheckMode::brute).has_value());
        CHECK_FALSE(check_triple_condition(a, TripleCheckMode::indexed).has_value());
    }
    SUBCASE("corner yields a non-diagonal tuple") {
        const CornerSet a = corner_set_1d({{1, 1}, {2, 1}, {1, 2}});
        const auto w = check_triple_condition(a, TripleCheckMode::brute);
        REQUIRE(w.has_value());
        CHECK(w->kind == WitnessKind::triple_condition);
        REQUIRE(w->pairs.size() == 3);
        // the equations actually hold for the carried tuple
        const auto& [x1, y1] = w->pairs[0];
        const auto& [x2, y2] = w->pairs[1];
        const auto& [x3, y3] = w->pairs[2];
        CHECK(x2 == x3);
        CHECK(y3 == y1);
        CHECK(x1[0] + y1[0] == x2[0] + y2[0]);
        CHECK_FALSE((w->pairs[0] == w->pairs[1] && w->pairs[1] == w->pairs[2]));
        for (const auto& [px, py] : w->pairs) CHECK(a.contains(px, py));
        CHECK(check_triple_condition(a, TripleCheckMode::indexed).has_value());
    }
    SUBCASE("singleton") {
        CHECK_FALSE(check_triple_condition(corner_set_1d({{4, 2}})).has_value());
    }
    SUBCASE("brute budget") {
        const CornerSet a = corner_set_1d({{1, 1}, {2, 2}, {3, 3}});
        CHECK_THROWS_AS(check_triple_condition(a, TripleCheckMode::brute, 8), BudgetError);
    }
}

TEST_CASE("brute and indexed triple checks agree with the literal oracle") {
    Rng rng(271828);
    for (int rep = 0; rep < 50; ++rep) {
        const int dim = 1 + static_cast<int>(rng.next_u64() % 2);
        std::vector<std::pair<LatticePoint, LatticePoint>> pairs;
        const std::size_t count = 1 + rng.next_u64() % 25;
        for (std::size_t i = 0; i < count; ++i) {
            LatticePoint x(dim), y(dim);
            for (auto& v : x) v = static_cast<Coord>(rng.next_u64() % 5);
            for (auto& v : y) v = static_cast<Coord>(rng.next_u64() % 5);
            pairs.push_back({x, y});
        }
        const CornerSet a(dim, pairs);
        const bool expected = oracle::violates_triple_condition(a);
        CHECK(check_triple_condition(a, TripleCheckMode::brute).has_value() == expected);
        CHECK(check_triple_condition(a, TripleCheckMode::indexed).has_value() == expected);
    }
}

TEST_CASE("behrend_set produces progression-free subsets of {1..n}") {
    SUBCASE("n = 1") {
        const PointSet s = behrend_set(1);
        REQUIRE(s.size() == 1);
        CHECK(s.contains(LatticePoint{1}));
    }
    SUBCASE("small and medium n") {
        for (std::int64_t n : {2, 5, 10, 60, 500, 10000}) {
            const PointSet s = behrend_set(n);
            CHECK(s.size() >= 1);
            for (std::size_t i = 0; i < s.size(); ++i) {
                CHECK(s.point(i)[0] >= 1);
                CHECK(s.point(i)[0] <= n);
            }
            CHECK_FALSE(is_3ap_free(s).has_value());
        }
    }
    SUBCASE("n = 5 reaches the digit-construction level of size 2") {
        const PointSet s = behrend_set(5);
        CHECK(s.size() == 2);
    }
    CHECK_THROWS_AS(behrend_set(0), std::invalid_argument);
}

TEST_CASE("r3_exhaustive exact values and certified witnesses") {
    CHECK(r3_exhaustive(1).size == 1);
    CHECK(r3_exhaustive(2).size == 2);
    CHECK(r3_exhaustive(3).size == 2);
    CHECK(r3_exhaustive(4).size == 3);
    const R3Result r5 = r3_exhaustive(5);
    CHECK(r5.size == 4);
    CHECK_FALSE(is_3ap_free(r5.witness).has_value());
    CHECK_THROWS_AS(r3_exhaustive(26), BudgetError);
    CHECK_THROWS_AS(r3_exhaustive(0), std::invalid_argument);

    for (int n = 1; n <= 25; ++n) {
        const R3Result r = r3_exhaustive(n);
        CHECK_FALSE(is_3ap_free(r.witness).has_value());
        CHECK(static_cast<std::int64_t>(r.witness.size()) == r.size);
        for (std::size_t i = 0; i < r.witness.size(); ++i) {
            CHECK(r.witness.point(i)[0] >= 1);
            CHECK(r.witness.point(i)[0] <= n);
        }
        // the exhaustive maximum dominates the digit construction
        CHECK(r.size >= static_cast<std::int64_t>(behrend_set(n).size()));
    }
}

TEST_CASE("CornerSet deduplicates and validates") {
    const CornerSet a = corner_set_1d({{1, 2}, {1, 2}, {3, 4}});
    CHECK(a.size() == 2);
    CHECK(a.contains(LatticePoint{1}, LatticePoint{2}));
    CHECK_FALSE(a.contains(LatticePoint{2}, LatticePoint{1}));
    CHECK_THROWS_AS(CornerSet(2, {{{1}, {1, 2}}}), std::invalid_argument);
}
