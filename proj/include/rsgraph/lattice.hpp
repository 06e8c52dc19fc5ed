#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rsgraph/common.hpp"
#include "rsgraph/parallel.hpp"

namespace rsg {

using Coord = std::int64_t;

// Point of Z^D. Equality and hashing are coordinate-wise exact.
using LatticePoint = std::vector<Coord>;

// Euclidean ball with dyadic-rational center (denominator 2^20) and squared
// radius (denominator 2^40). Membership of a lattice point is decided in
// exact integer arithmetic; there is no floating-point boundary ambiguity.
class BallSpec {
public:
    BallSpec(int dim, int128 radius_sq_num, std::vector<std::int64_t> center_num);

    // center coordinates and r^2 are rounded *down* to their dyadic grids, so
    // boundary ties are excluded deterministically
    static BallSpec from_real(int dim, double radius, const std::vector<double>& center);
    static BallSpec origin(int dim, double radius);

    int dim() const { return dim_; }
    int128 radius_sq_num() const { return radius_sq_num_; }  // units of 2^-40
    const std::vector<std::int64_t>& center_num() const { return center_num_; }  // units of 2^-20
    double radius() const;
    double center_coord(int i) const;

    bool contains(const Coord* p) const {
        int128 acc = 0;
        for (int i = 0; i < dim_; ++i) {
            const int128 d = static_cast<int128>(p[i]) * kShiftScale - center_num_[i];
            acc += d * d;
            if (acc > radius_sq_num_) return false;
        }
        return true;
    }
    bool contains(const LatticePoint& p) const { return contains(p.data()); }

    // translate the center by shift (units of 2^-20); shift.size() == dim
    BallSpec shifted(const std::vector<std::int64_t>& shift_num) const;

private:
    int dim_;
    int128 radius_sq_num_;
    std::vector<std::int64_t> center_num_;
};

// Deduplicated set of lattice points in lexicographic order with O(1)
// expected-time membership.
class PointSet {
public:
    PointSet() = default;
    PointSet(int dim, std::vector<LatticePoint> points);
    // flat must be lexicographically sorted rows without duplicates
    static PointSet from_sorted_flat(int dim, std::vector<Coord> flat);

    int dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : flat_.size() / dim_; }
    bool empty() const { return flat_.empty(); }
    const Coord* point(std::size_t i) const { return flat_.data() + i * dim_; }
    LatticePoint point_vec(std::size_t i) const {
        return LatticePoint(point(i), point(i) + dim_);
    }
    const std::vector<Coord>& flat() const { return flat_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find(const Coord* p) const;
    bool contains(const Coord* p) const { return find(p) != npos; }
    bool contains(const LatticePoint& p) const { return find(p.data()) != npos; }

    // new set holding points [first, last) of this set's lexicographic order
    PointSet slice(std::size_t first, std::size_t last) const;
    // coordinate-wise translate
    PointSet translated(const LatticePoint& offset) const;
    LatticePoint coordinate_min() const;
    LatticePoint coordinate_max() const;

private:
    void build_index();

    int dim_ = 0;
    std::vector<Coord> flat_;
    std::vector<std::uint32_t> buckets_;  // open addressing, entries are index+1
};

// Outcome of the shift search over the dyadic grid.
struct ShiftResult {
    std::vector<std::int64_t> shift_num;  // in [0, 2^20)^d, units of 2^-20
    std::int64_t count = 0;
    double target = 0.0;  // the measure mu(S) the count is compared against
    bool achieved = false;
    std::int64_t trials = 0;
    double mean_count = 0.0;    // across all trials
    double stddev_count = 0.0;  // sample stddev across trials
    std::size_t best_trial = 0;
};

// Product-of-balls shift problem: count pairs (x, y) of lattice points with
// x in t1+Bx, y in t2+By, x+y in t1+t2+Bsum, over shifts t = (t1,t2).
struct ShiftProblem {
    BallSpec x;
    BallSpec y;
    BallSpec sum;
};

double ball_volume(int dim, double radius);
double radius_for_volume(int dim, double volume);

// All lattice points p with ||p - center||^2 <= r^2 (exact comparison), in
// lexicographic order. Throws BudgetError when the scan box exceeds the budget.
PointSet enumerate_ball(const BallSpec& spec, std::int64_t point_budget = kDefaultPointBudget);

// Exact count of ordered pairs (x, y), x in X, y in Y, with x + y in Z.
// Z is any total membership predicate over Z^dim: callable on const Coord*.
template <class ZPred>
std::int64_t count_additive_triples(const PointSet& x, const PointSet& y, ZPred&& in_z,
                                    std::int64_t pair_budget = kDefaultPairBudget,
                                    unsigned workers = 1) {
    if (x.dim() != y.dim())
        throw std::invalid_argument("count_additive_triples: dimension mismatch");
    const int dim = x.dim();
    const std::size_t nx = x.size(), ny = y.size();
    if (nx != 0 && ny != 0 &&
        static_cast<int128>(nx) * static_cast<int128>(ny) > pair_budget)
        throw BudgetError("count_additive_triples: pair budget " + std::to_string(pair_budget) +
                          " exceeded by " + std::to_string(nx) + "*" + std::to_string(ny));
    constexpr std::size_t kChunkRows = 256;  // fixed so results ignore worker count
    const std::size_t jobs = (nx + kChunkRows - 1) / kChunkRows;
    std::vector<std::int64_t> partial(jobs, 0);
    parallel_for(jobs, workers, [&](std::size_t j) {
        std::vector<Coord> s(dim);
        std::int64_t c = 0;
        const std::size_t lo = j * kChunkRows;
        const std::size_t hi = lo + kChunkRows < nx ? lo + kChunkRows : nx;
        for (std::size_t i = lo; i < hi; ++i) {
            const Coord* xp = x.point(i);
            for (std::size_t k = 0; k < ny; ++k) {
                const Coord* yp = y.point(k);
                for (int d = 0; d < dim; ++d) s[d] = xp[d] + yp[d];
                if (in_z(s.data())) ++c;
            }
        }
        partial[j] = c;
    });
    std::int64_t total = 0;
    for (std::int64_t c : partial) total += c;
    return total;
}

std::int64_t count_additive_triples(const PointSet& x, const PointSet& y, const PointSet& z,
                                    std::int64_t pair_budget = kDefaultPairBudget,
                                    unsigned workers = 1);
std::int64_t count_additive_triples(const PointSet& x, const PointSet& y, const BallSpec& z,
                                    std::int64_t pair_budget = kDefaultPairBudget,
                                    unsigned workers = 1);

// Collect mode: materializes the (x, y) pairs instead of counting them.
std::vector<std::pair<LatticePoint, LatticePoint>> collect_additive_pairs(
    const PointSet& x, const PointSet& y, const PointSet& z,
    std::int64_t pair_budget = kDefaultPairBudget);

// Samples `trials` shifts t in [0,1)^{2D} on the dyadic grid, counts pairs for
// each, and returns the best-count shift (ties go to the earliest trial).
// Deterministic given seed; trials run as independent tasks.
ShiftResult find_good_shift(const ShiftProblem& problem, double target, std::int64_t trials,
                            std::uint64_t seed,
                            std::int64_t point_budget = kDefaultPointBudget,
                            std::int64_t pair_budget = kDefaultPairBudget,
                            unsigned workers = 0);

// Independent recount of the pair count for one explicit shift.
std::int64_t pair_count_for_shift(const ShiftProblem& problem,
                                  const std::vector<std::int64_t>& shift_num,
                                  std::int64_t point_budget = kDefaultPointBudget,
                                  std::int64_t pair_budget = kDefaultPairBudget);

}  // namespace rsg
