#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsgraph/lattice.hpp"

namespace rsg {

// Set A of lattice-point pairs (x, y). The three projections are implied, not
// stored: f1(a) = x, f2(a) = y, f3(a) = x + y.
class CornerSet {
public:
    CornerSet() = default;
    CornerSet(int dim, std::vector<std::pair<LatticePoint, LatticePoint>> pairs);

    int dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : flat_.size() / (2 * dim_); }
    bool empty() const { return flat_.empty(); }
    const Coord* x(std::size_t i) const { return flat_.data() + i * 2 * dim_; }
    const Coord* y(std::size_t i) const { return flat_.data() + i * 2 * dim_ + dim_; }
    std::pair<LatticePoint, LatticePoint> pair(std::size_t i) const {
        return {LatticePoint(x(i), x(i) + dim_), LatticePoint(y(i), y(i) + dim_)};
    }
    bool contains(const Coord* px, const Coord* py) const;
    bool contains(const LatticePoint& px, const LatticePoint& py) const {
        return contains(px.data(), py.data());
    }

private:
    void build_index();

    int dim_ = 0;
    std::vector<Coord> flat_;  // rows of 2*dim: x then y, lexicographically sorted
    std::vector<std::uint32_t> buckets_;
};

enum class WitnessKind { corner, three_ap, triple_condition, diamond };

// Violation certificate. Re-evaluating the defining equations on the carried
// elements must confirm the violation, independent of the checker that
// produced it.
struct Witness {
    WitnessKind kind = WitnessKind::corner;
    // corner: points = {x, y} with (x,y), (x+d,y), (x,y+d) all present
    // three_ap: points = {a, a+d, a+2d}
    std::vector<LatticePoint> points;
    // triple_condition: pairs = {a1, a2, a3}, a non-diagonal solution tuple
    std::vector<std::pair<LatticePoint, LatticePoint>> pairs;
    LatticePoint difference;  // the nonzero d, when applicable
    // diamond: an edge plus the 0 or >=2 triangles containing it
    std::pair<std::uint32_t, std::uint32_t> edge{0, 0};
    std::vector<std::array<std::uint32_t, 3>> triangles;

    std::string describe() const;
};

// ||x - y||_2^2 in exact integer arithmetic.
std::int64_t norm_color(const Coord* x, const Coord* y, int dim);
std::int64_t norm_color(const LatticePoint& x, const LatticePoint& y);

struct ClassExtraction {
    std::int64_t color = 0;
    CornerSet cornerfree;
    std::int64_t classes_present = 0;
};

// Partitions a0 by norm_color and returns the largest class (ties go to the
// smallest color value). The pigeonhole bound |class| * classes_present >= |a0|
// holds exactly, and the returned class is corner-free.
ClassExtraction largest_cornerfree_class(const CornerSet& a0);

// std::nullopt when no corner (x,y), (x+d,y), (x,y+d) with d != 0 exists;
// otherwise a corner witness.
std::optional<Witness> is_corner_free(const CornerSet& a);

// std::nullopt when w has no nontrivial 3-term arithmetic progression.
// Ambient group is torsion-free (Z^D), so the midpoint test is valid.
std::optional<Witness> is_3ap_free(const PointSet& w);

enum class TripleCheckMode { brute, indexed };

// Checks that every (a1, a2, a3) in A^3 with f1(a2)=f1(a3), f2(a3)=f2(a1),
// f3(a1)=f3(a2) is diagonal. Brute mode scans all |A|^3 tuples (budget-capped)
// and serves as the independent oracle for the indexed mode.
std::optional<Witness> check_triple_condition(const CornerSet& a,
                                              TripleCheckMode mode = TripleCheckMode::indexed,
                                              std::int64_t budget = kDefaultTripleBudget);

// 3-AP-free subset of {1,...,n} from digit expansions onto a fixed
// digit-square-sum level; the best level over all scanned bases wins.
PointSet behrend_set(std::int64_t n);

struct R3Result {
    std::int64_t size = 0;
    PointSet witness;  // dim 1, a maximum 3-AP-free subset of {1,...,n}
};

// Exact maximum 3-AP-free subset of {1,...,n} by branch and bound, n <= 25.
R3Result r3_exhaustive(int n);

}  // namespace rsg
