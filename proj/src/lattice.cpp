#include "rsgraph/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsgraph/rng.hpp"

namespace rsg {

namespace {

constexpr int kMaxDim = 64;

void check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDim) + "]");
}

bool span_eq(const Coord* a, const Coord* b, int dim) {
    for (int i = 0; i < dim; ++i)
        if (a[i] != b[i]) return false;
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// BallSpec

BallSpec::BallSpec(int dim, int128 radius_sq_num, std::vector<std::int64_t> center_num)
    : dim_(dim), radius_sq_num_(radius_sq_num), center_num_(std::move(center_num)) {
    check_dim(dim_);
    if (radius_sq_num_ < 0) throw std::invalid_argument("BallSpec: negative squared radius");
    if (center_num_.size() != static_cast<std::size_t>(dim_))
        throw std::invalid_argument("BallSpec: center length != dim");
}

BallSpec BallSpec::from_real(int dim, double radius, const std::vector<double>& center) {
    check_dim(dim);
    if (radius < 0) throw std::invalid_argument("BallSpec: negative radius");
    if (!center.empty() && center.size() != static_cast<std::size_t>(dim))
        throw std::invalid_argument("BallSpec: center length != dim");
    const long double r = radius;
    const int128 rsq = static_cast<int128>(
        std::floor(r * r * static_cast<long double>(kRadiusSqScale)));
    std::vector<std::int64_t> cnum(dim, 0);
    for (std::size_t i = 0; i < center.size(); ++i)
        cnum[i] = static_cast<std::int64_t>(
            std::floor(static_cast<long double>(center[i]) * kShiftScale));
    return BallSpec(dim, rsq, std::move(cnum));
}

BallSpec BallSpec::origin(int dim, double radius) { return from_real(dim, radius, {}); }

double BallSpec::radius() const {
    return std::sqrt(static_cast<double>(static_cast<long double>(radius_sq_num_) /
                                         kRadiusSqScale));
}

double BallSpec::center_coord(int i) const {
    return static_cast<double>(center_num_[i]) / kShiftScale;
}

BallSpec BallSpec::shifted(const std::vector<std::int64_t>& shift_num) const {
    if (shift_num.size() != static_cast<std::size_t>(dim_))
        throw std::invalid_argument("BallSpec::shifted: shift length != dim");
    std::vector<std::int64_t> c = center_num_;
    for (int i = 0; i < dim_; ++i) c[i] += shift_num[i];
    return BallSpec(dim_, radius_sq_num_, std::move(c));
}

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(int dim, std::vector<LatticePoint> points) : dim_(dim) {
    check_dim(dim_);
    for (const auto& p : points)
        if (p.size() != static_cast<std::size_t>(dim_))
            throw std::invalid_argument("PointSet: point dimension mismatch");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    flat_.reserve(points.size() * dim_);
    for (const auto& p : points) flat_.insert(flat_.end(), p.begin(), p.end());
    build_index();
}

PointSet PointSet::from_sorted_flat(int dim, std::vector<Coord> flat) {
    check_dim(dim);
    if (flat.size() % dim != 0)
        throw std::invalid_argument("PointSet: flat size not a multiple of dim");
    PointSet s;
    s.dim_ = dim;
    s.flat_ = std::move(flat);
    s.build_index();
    return s;
}

void PointSet::build_index() {
    const std::size_t n = size();
    if (n > std::numeric_limits<std::uint32_t>::max() - 2)
        throw BudgetError("PointSet: too many points to index");
    std::size_t cap = 8;
    while (cap < 2 * n) cap <<= 1;
    buckets_.assign(cap, 0);
    const std::size_t mask = cap - 1;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t b = hash_span(point(i), dim_) & mask;
        while (buckets_[b] != 0) b = (b + 1) & mask;
        buckets_[b] = static_cast<std::uint32_t>(i) + 1;
    }
}

std::size_t PointSet::find(const Coord* p) const {
    if (buckets_.empty()) return npos;
    const std::size_t mask = buckets_.size() - 1;
    std::size_t b = hash_span(p, dim_) & mask;
    while (buckets_[b] != 0) {
        const std::size_t i = buckets_[b] - 1;
        if (span_eq(point(i), p, dim_)) return i;
        b = (b + 1) & mask;
    }
    return npos;
}

PointSet PointSet::slice(std::size_t first, std::size_t last) const {
    if (first > last || last > size()) throw std::out_of_range("PointSet::slice");
    std::vector<Coord> flat(flat_.begin() + first * dim_, flat_.begin() + last * dim_);
    return from_sorted_flat(dim_, std::move(flat));
}

PointSet PointSet::translated(const LatticePoint& offset) const {
    if (offset.size() != static_cast<std::size_t>(dim_))
        throw std::invalid_argument("PointSet::translated: offset dimension mismatch");
    std::vector<Coord> flat = flat_;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i)
        for (int d = 0; d < dim_; ++d) flat[i * dim_ + d] += offset[d];
    return from_sorted_flat(dim_, std::move(flat));  // translation preserves lex order
}

LatticePoint PointSet::coordinate_min() const {
    if (empty()) throw std::logic_error("coordinate_min of empty set");
    LatticePoint m(point(0), point(0) + dim_);
    for (std::size_t i = 1; i < size(); ++i)
        for (int d = 0; d < dim_; ++d) m[d] = std::min(m[d], point(i)[d]);
    return m;
}

LatticePoint PointSet::coordinate_max() const {
    if (empty()) throw std::logic_error("coordinate_max of empty set");
    LatticePoint m(point(0), point(0) + dim_);
    for (std::size_t i = 1; i < size(); ++i)
        for (int d = 0; d < dim_; ++d) m[d] = std::max(m[d], point(i)[d]);
    return m;
}

// ---------------------------------------------------------------------------
// Volumes

double ball_volume(int dim, double radius) {
    check_dim(dim);
    if (radius <= 0) throw std::invalid_argument("ball_volume: radius must be positive");
    const long double d = dim;
    const long double log_vol = (d / 2) * std::log(3.141592653589793238462643L) -
                                std::lgamma(d / 2 + 1) + d * std::log(static_cast<long double>(radius));
    return static_cast<double>(std::exp(log_vol));
}

double radius_for_volume(int dim, double volume) {
    check_dim(dim);
    if (volume <= 0) throw std::invalid_argument("radius_for_volume: volume must be positive");
    const long double d = dim;
    const long double log_r = (std::log(static_cast<long double>(volume)) +
                               std::lgamma(d / 2 + 1) -
                               (d / 2) * std::log(3.141592653589793238462643L)) / d;
    return static_cast<double>(std::exp(log_r));
}

// ---------------------------------------------------------------------------
// Enumeration

PointSet enumerate_ball(const BallSpec& spec, std::int64_t point_budget) {
    const int dim = spec.dim();
    const long double sqrt_q = std::sqrt(static_cast<long double>(spec.radius_sq_num()));
    std::vector<Coord> lo(dim), hi(dim);
    int128 cells = 1;
    for (int i = 0; i < dim; ++i) {
        const long double c = spec.center_num()[i];
        lo[i] = static_cast<Coord>(std::ceil((c - sqrt_q) / kShiftScale)) - 1;
        hi[i] = static_cast<Coord>(std::floor((c + sqrt_q) / kShiftScale)) + 1;
        if (lo[i] > hi[i]) return PointSet::from_sorted_flat(dim, {});
        cells *= static_cast<int128>(hi[i] - lo[i] + 1);
        if (cells > point_budget)
            throw BudgetError("enumerate_ball: scan box exceeds point budget " +
                              std::to_string(point_budget));
    }
    std::vector<Coord> flat;
    std::vector<Coord> cur(dim);
    std::vector<int128> partial(dim + 1, 0);
    // depth-first over coordinates in increasing order -> lexicographic output
    auto descend = [&](auto&& self, int axis) -> void {
        if (axis == dim) {
            flat.insert(flat.end(), cur.begin(), cur.end());
            return;
        }
        for (Coord v = lo[axis]; v <= hi[axis]; ++v) {
            const int128 d = static_cast<int128>(v) * kShiftScale - spec.center_num()[axis];
            const int128 acc = partial[axis] + d * d;
            if (acc > spec.radius_sq_num()) continue;
            partial[axis + 1] = acc;
            cur[axis] = v;
            self(self, axis + 1);
        }
    };
    descend(descend, 0);
    return PointSet::from_sorted_flat(dim, std::move(flat));
}

// ---------------------------------------------------------------------------
// Pair counting

std::int64_t count_additive_triples(const PointSet& x, const PointSet& y, const PointSet& z,
                                    std::int64_t pair_budget, unsigned workers) {
    if (z.dim() != 0 && x.dim() != z.dim())
        throw std::invalid_argument("count_additive_triples: dimension mismatch");
    return count_additive_triples(
        x, y, [&z](const Coord* s) { return z.contains(s); }, pair_budget, workers);
}

std::int64_t count_additive_triples(const PointSet& x, const PointSet& y, const BallSpec& z,
                                    std::int64_t pair_budget, unsigned workers) {
    if (x.dim() != z.dim())
        throw std::invalid_argument("count_additive_triples: dimension mismatch");
    return count_additive_triples(
        x, y, [&z](const Coord* s) { return z.contains(s); }, pair_budget, workers);
}

std::vector<std::pair<LatticePoint, LatticePoint>> collect_additive_pairs(
    const PointSet& x, const PointSet& y, const PointSet& z, std::int64_t pair_budget) {
    if (x.dim() != y.dim() || (z.dim() != 0 && x.dim() != z.dim()))
        throw std::invalid_argument("collect_additive_pairs: dimension mismatch");
    const int dim = x.dim();
    if (!x.empty() && !y.empty() &&
        static_cast<int128>(x.size()) * static_cast<int128>(y.size()) > pair_budget)
        throw BudgetError("collect_additive_pairs: pair budget " + std::to_string(pair_budget) +
                          " exceeded");
    std::vector<std::pair<LatticePoint, LatticePoint>> out;
    std::vector<Coord> s(dim);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t k = 0; k < y.size(); ++k) {
            for (int d = 0; d < dim; ++d) s[d] = x.point(i)[d] + y.point(k)[d];
            if (z.contains(s.data())) out.emplace_back(x.point_vec(i), y.point_vec(k));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shift search

namespace {

std::int64_t eval_shift(const ShiftProblem& p, const std::vector<std::int64_t>& shift,
                        std::int64_t point_budget, std::int64_t pair_budget) {
    const int dim = p.x.dim();
    const std::vector<std::int64_t> t1(shift.begin(), shift.begin() + dim);
    const std::vector<std::int64_t> t2(shift.begin() + dim, shift.end());
    std::vector<std::int64_t> t12(dim);
    for (int i = 0; i < dim; ++i) t12[i] = t1[i] + t2[i];
    const PointSet xs = enumerate_ball(p.x.shifted(t1), point_budget);
    const PointSet ys = enumerate_ball(p.y.shifted(t2), point_budget);
    const BallSpec zs = p.sum.shifted(t12);
    return count_additive_triples(xs, ys, zs, pair_budget, 1);
}

}  // namespace

ShiftResult find_good_shift(const ShiftProblem& problem, double target, std::int64_t trials,
                            std::uint64_t seed, std::int64_t point_budget,
                            std::int64_t pair_budget, unsigned workers) {
    if (problem.x.dim() != problem.y.dim() || problem.x.dim() != problem.sum.dim())
        throw std::invalid_argument("find_good_shift: specs must share dim");
    if (target < 0) throw std::invalid_argument("find_good_shift: target must be >= 0");
    if (trials < 1) throw std::invalid_argument("find_good_shift: trials must be >= 1");
    const int dim = problem.x.dim();
    std::vector<std::int64_t> counts(trials, 0);
    std::vector<std::vector<std::int64_t>> shifts(trials);
    parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t i) {
        Rng rng(derive_seed(seed, i));
        std::vector<std::int64_t> t(2 * dim);
        for (auto& v : t) v = rng.next_grid20();
        counts[i] = eval_shift(problem, t, point_budget, pair_budget);
        shifts[i] = std::move(t);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < shifts.size(); ++i)
        if (counts[i] > counts[best]) best = i;
    double mean = 0.0;
    for (std::int64_t c : counts) mean += static_cast<double>(c);
    mean /= static_cast<double>(trials);
    double m2 = 0.0;
    for (std::int64_t c : counts) {
        const double d = static_cast<double>(c) - mean;
        m2 += d * d;
    }
    ShiftResult r;
    r.shift_num = shifts[best];
    r.count = counts[best];
    r.target = target;
    r.achieved = static_cast<double>(r.count) >= target;
    r.trials = trials;
    r.mean_count = mean;
    r.stddev_count = trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1)) : 0.0;
    r.best_trial = best;
    return r;
}

std::int64_t pair_count_for_shift(const ShiftProblem& problem,
                                  const std::vector<std::int64_t>& shift_num,
                                  std::int64_t point_budget, std::int64_t pair_budget) {
    if (shift_num.size() != static_cast<std::size_t>(2 * problem.x.dim()))
        throw std::invalid_argument("pair_count_for_shift: shift length != 2*dim");
    return eval_shift(problem, shift_num, point_budget, pair_budget);
}

}  // namespace rsg
