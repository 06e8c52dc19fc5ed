#include "rsgraph/additive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace rsg {

namespace {

bool span_eq(const Coord* a, const Coord* b, int dim) {
    for (int i = 0; i < dim; ++i)
        if (a[i] != b[i]) return false;
    return true;
}

std::string span_str(const Coord* p, int dim) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < dim; ++i) os << (i ? "," : "") << p[i];
    os << ")";
    return os.str();
}

std::string point_str(const LatticePoint& p) { return span_str(p.data(), static_cast<int>(p.size())); }

}  // namespace

// ---------------------------------------------------------------------------
// CornerSet

CornerSet::CornerSet(int dim, std::vector<std::pair<LatticePoint, LatticePoint>> pairs)
    : dim_(dim) {
    if (dim_ < 1) throw std::invalid_argument("CornerSet: dim must be >= 1");
    for (const auto& [px, py] : pairs)
        if (px.size() != static_cast<std::size_t>(dim_) ||
            py.size() != static_cast<std::size_t>(dim_))
            throw std::invalid_argument("CornerSet: pair dimension mismatch");
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    flat_.reserve(pairs.size() * 2 * dim_);
    for (const auto& [px, py] : pairs) {
        flat_.insert(flat_.end(), px.begin(), px.end());
        flat_.insert(flat_.end(), py.begin(), py.end());
    }
    build_index();
}

void CornerSet::build_index() {
    const std::size_t n = size();
    if (n > std::numeric_limits<std::uint32_t>::max() - 2)
        throw BudgetError("CornerSet: too many pairs to index");
    std::size_t cap = 8;
    while (cap < 2 * n) cap <<= 1;
    buckets_.assign(cap, 0);
    const std::size_t mask = cap - 1;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t b = hash_span(x(i), 2 * dim_) & mask;
        while (buckets_[b] != 0) b = (b + 1) & mask;
        buckets_[b] = static_cast<std::uint32_t>(i) + 1;
    }
}

bool CornerSet::contains(const Coord* px, const Coord* py) const {
    if (buckets_.empty()) return false;
    std::vector<Coord> row(2 * dim_);
    std::copy(px, px + dim_, row.begin());
    std::copy(py, py + dim_, row.begin() + dim_);
    const std::size_t mask = buckets_.size() - 1;
    std::size_t b = hash_span(row.data(), 2 * dim_) & mask;
    while (buckets_[b] != 0) {
        const std::size_t i = buckets_[b] - 1;
        if (span_eq(x(i), row.data(), 2 * dim_)) return true;
        b = (b + 1) & mask;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Witness

std::string Witness::describe() const {
    std::ostringstream os;
    switch (kind) {
        case WitnessKind::corner:
            os << "corner at x=" << point_str(points.at(0)) << " y=" << point_str(points.at(1))
               << " d=" << point_str(difference);
            break;
        case WitnessKind::three_ap:
            os << "3-AP {" << point_str(points.at(0)) << ", " << point_str(points.at(1)) << ", "
               << point_str(points.at(2)) << "} d=" << point_str(difference);
            break;
        case WitnessKind::triple_condition:
            os << "non-diagonal tuple a1=(" << point_str(pairs.at(0).first) << ","
               << point_str(pairs.at(0).second) << ") a2=(" << point_str(pairs.at(1).first) << ","
               << point_str(pairs.at(1).second) << ") a3=(" << point_str(pairs.at(2).first) << ","
               << point_str(pairs.at(2).second) << ")";
            break;
        case WitnessKind::diamond:
            os << "edge {" << edge.first << "," << edge.second << "} lies in " << triangles.size()
               << " triangles";
            break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Coloring

std::int64_t norm_color(const Coord* x, const Coord* y, int dim) {
    int128 acc = 0;
    for (int i = 0; i < dim; ++i) {
        const int128 d = static_cast<int128>(x[i]) - y[i];
        acc += d * d;
    }
    if (acc > std::numeric_limits<std::int64_t>::max())
        throw BudgetError("norm_color: squared norm exceeds int64 range");
    return static_cast<std::int64_t>(acc);
}

std::int64_t norm_color(const LatticePoint& x, const LatticePoint& y) {
    if (x.size() != y.size()) throw std::invalid_argument("norm_color: dimension mismatch");
    return norm_color(x.data(), y.data(), static_cast<int>(x.size()));
}

ClassExtraction largest_cornerfree_class(const CornerSet& a0) {
    if (a0.empty()) throw std::invalid_argument("largest_cornerfree_class: empty input");
    const std::size_t n = a0.size();
    std::unordered_map<std::int64_t, std::int64_t> histogram;
    for (std::size_t i = 0; i < n; ++i) ++histogram[norm_color(a0.x(i), a0.y(i), a0.dim())];
    std::int64_t best_color = 0, best_count = -1;
    for (const auto& [color, count] : histogram) {
        if (count > best_count || (count == best_count && color < best_color)) {
            best_color = color;
            best_count = count;
        }
    }
    std::vector<std::pair<LatticePoint, LatticePoint>> members;
    members.reserve(static_cast<std::size_t>(best_count));
    for (std::size_t i = 0; i < n; ++i)
        if (norm_color(a0.x(i), a0.y(i), a0.dim()) == best_color) members.push_back(a0.pair(i));
    ClassExtraction out;
    out.color = best_color;
    out.cornerfree = CornerSet(a0.dim(), std::move(members));
    out.classes_present = static_cast<std::int64_t>(histogram.size());
    return out;
}

// ---------------------------------------------------------------------------
// Verifiers

std::optional<Witness> is_corner_free(const CornerSet& a) {
    const int dim = a.dim();
    const std::size_t n = a.size();
    if (n < 2) return std::nullopt;
    // group indices by y; rows are already sorted by (x, y), so sort by (y, x)
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        for (int d = 0; d < dim; ++d)
            if (a.y(i)[d] != a.y(j)[d]) return a.y(i)[d] < a.y(j)[d];
        for (int d = 0; d < dim; ++d)
            if (a.x(i)[d] != a.x(j)[d]) return a.x(i)[d] < a.x(j)[d];
        return false;
    });
    std::vector<Coord> third(dim);
    std::size_t g0 = 0;
    while (g0 < n) {
        std::size_t g1 = g0 + 1;
        while (g1 < n && span_eq(a.y(order[g0]), a.y(order[g1]), dim)) ++g1;
        for (std::size_t i = g0; i < g1; ++i) {
            for (std::size_t j = g0; j < g1; ++j) {
                if (i == j) continue;
                const Coord* x1 = a.x(order[i]);
                const Coord* x2 = a.x(order[j]);
                const Coord* yy = a.y(order[i]);
                // d = x2 - x1 != 0; corner closes iff (x1, y + d) is present
                for (int d = 0; d < dim; ++d) third[d] = yy[d] + (x2[d] - x1[d]);
                if (a.contains(x1, third.data())) {
                    Witness w;
                    w.kind = WitnessKind::corner;
                    w.points = {LatticePoint(x1, x1 + dim), LatticePoint(yy, yy + dim)};
                    w.difference.resize(dim);
                    for (int d = 0; d < dim; ++d) w.difference[d] = x2[d] - x1[d];
                    return w;
                }
            }
        }
        g0 = g1;
    }
    return std::nullopt;
}

std::optional<Witness> is_3ap_free(const PointSet& w) {
    const int dim = w.dim();
    const std::size_t n = w.size();
    if (n < 3) return std::nullopt;
    std::vector<Coord> mid(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const Coord* a = w.point(i);
            const Coord* c = w.point(j);
            bool integral = true;
            for (int d = 0; d < dim; ++d) {
                const Coord s = a[d] + c[d];
                if (s % 2 != 0) {
                    integral = false;
                    break;
                }
                mid[d] = s / 2;
            }
            if (!integral || !w.contains(mid.data())) continue;
            if (span_eq(mid.data(), a, dim)) continue;  // a == m == c is impossible; a==m means a==c
            Witness out;
            out.kind = WitnessKind::three_ap;
            out.points = {LatticePoint(a, a + dim), LatticePoint(mid.begin(), mid.end()),
                          LatticePoint(c, c + dim)};
            out.difference.resize(dim);
            for (int d = 0; d < dim; ++d) out.difference[d] = c[d] - mid[d];
            return out;
        }
    }
    return std::nullopt;
}

std::optional<Witness> check_triple_condition(const CornerSet& a, TripleCheckMode mode,
                                              std::int64_t budget) {
    const int dim = a.dim();
    const std::size_t n = a.size();
    if (n < 2) return std::nullopt;
    auto make_witness = [&](std::size_t i1, const Coord* a1x, const Coord* a1y, std::size_t i2,
                            std::size_t i3) {
        Witness w;
        w.kind = WitnessKind::triple_condition;
        if (i1 != static_cast<std::size_t>(-1))
            w.pairs.push_back(a.pair(i1));
        else
            w.pairs.emplace_back(LatticePoint(a1x, a1x + dim), LatticePoint(a1y, a1y + dim));
        w.pairs.push_back(a.pair(i2));
        w.pairs.push_back(a.pair(i3));
        return w;
    };
    if (mode == TripleCheckMode::brute) {
        const int128 tuples = static_cast<int128>(n) * n * n;
        if (tuples > budget)
            throw BudgetError("check_triple_condition: |A|^3 exceeds brute budget " +
                              std::to_string(budget));
        std::vector<Coord> s1(dim), s2(dim);
        for (std::size_t i1 = 0; i1 < n; ++i1)
            for (std::size_t i2 = 0; i2 < n; ++i2)
                for (std::size_t i3 = 0; i3 < n; ++i3) {
                    if (i1 == i2 && i2 == i3) continue;
                    if (!span_eq(a.x(i2), a.x(i3), dim)) continue;      // f1(a2) = f1(a3)
                    if (!span_eq(a.y(i3), a.y(i1), dim)) continue;      // f2(a3) = f2(a1)
                    bool sum_eq = true;                                  // f3(a1) = f3(a2)
                    for (int d = 0; d < dim; ++d)
                        if (a.x(i1)[d] + a.y(i1)[d] != a.x(i2)[d] + a.y(i2)[d]) {
                            sum_eq = false;
                            break;
                        }
                    if (!sum_eq) continue;
                    return make_witness(i1, nullptr, nullptr, i2, i3);
                }
        return std::nullopt;
    }
    // indexed: group by f1 = x (rows are sorted by (x, y), so groups are
    // contiguous); a pair (a3, a2) in one group forces a1 = (x + (y2 - y3), y3)
    std::vector<Coord> a1x(dim);
    std::size_t g0 = 0;
    while (g0 < n) {
        std::size_t g1 = g0 + 1;
        while (g1 < n && span_eq(a.x(g0), a.x(g1), dim)) ++g1;
        for (std::size_t i3 = g0; i3 < g1; ++i3) {
            for (std::size_t i2 = g0; i2 < g1; ++i2) {
                if (i2 == i3) continue;
                const Coord* xg = a.x(i3);
                const Coord* y3 = a.y(i3);
                const Coord* y2 = a.y(i2);
                for (int d = 0; d < dim; ++d) a1x[d] = xg[d] + (y2[d] - y3[d]);
                if (a.contains(a1x.data(), y3)) {
                    Witness w = make_witness(static_cast<std::size_t>(-1), a1x.data(), y3, i2, i3);
                    return w;
                }
            }
        }
        g0 = g1;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Behrend sets

PointSet behrend_set(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("behrend_set: n must be >= 1");
    std::vector<LatticePoint> best = {{1}};
    std::int64_t best_size = 1;
    std::int64_t best_d = 0, best_k = 0, best_level = -1;
    if (n >= 2) {
        const std::int64_t dmax =
            static_cast<std::int64_t>(std::ceil(std::exp(std::sqrt(std::log(static_cast<double>(n)))))) + 2;
        for (std::int64_t d = 2; d <= dmax; ++d) {
            const std::int64_t base = 2 * d - 1;
            std::int64_t pw = base;  // base^k
            for (std::int64_t k = 1;; ++k) {
                if ((pw - 1) / 2 > n - 1) break;
                // count of digit vectors in {0..d-1}^k per digit-square-sum level
                const std::int64_t max_level = k * (d - 1) * (d - 1);
                std::vector<std::int64_t> ways(static_cast<std::size_t>(max_level) + 1, 0);
                ways[0] = 1;
                for (std::int64_t pos = 0; pos < k; ++pos) {
                    std::vector<std::int64_t> next(ways.size(), 0);
                    for (std::size_t s = 0; s < ways.size(); ++s) {
                        if (ways[s] == 0) continue;
                        for (std::int64_t t = 0; t < d; ++t) {
                            const std::size_t s2 = s + static_cast<std::size_t>(t * t);
                            if (s2 < next.size()) next[s2] += ways[s];
                        }
                    }
                    ways.swap(next);
                }
                for (std::size_t level = 0; level < ways.size(); ++level) {
                    if (ways[level] > best_size) {
                        best_size = ways[level];
                        best_d = d;
                        best_k = k;
                        best_level = static_cast<std::int64_t>(level);
                    }
                }
                if (pw > (std::numeric_limits<std::int64_t>::max() - 1) / base) break;
                pw *= base;
            }
        }
    }
    if (best_level >= 0) {
        // enumerate the chosen level
        const std::int64_t d = best_d, k = best_k, base = 2 * d - 1;
        best.clear();
        std::vector<std::int64_t> digits(static_cast<std::size_t>(k), 0);
        auto emit = [&]() {
            std::int64_t v = 0, p = 1;
            for (std::int64_t i = 0; i < k; ++i) {
                v += digits[static_cast<std::size_t>(i)] * p;
                p *= base;
            }
            best.push_back({v + 1});
        };
        auto dfs = [&](auto&& self, std::int64_t pos, std::int64_t rem) -> void {
            if (rem > (k - pos) * (d - 1) * (d - 1)) return;
            if (pos == k) {
                if (rem == 0) emit();
                return;
            }
            for (std::int64_t t = 0; t < d; ++t) {
                if (t * t > rem) break;
                digits[static_cast<std::size_t>(pos)] = t;
                self(self, pos + 1, rem - t * t);
            }
        };
        dfs(dfs, 0, best_level);
    }
    return PointSet(1, std::move(best));
}

// ---------------------------------------------------------------------------
// Exhaustive r3

R3Result r3_exhaustive(int n) {
    if (n < 1) throw std::invalid_argument("r3_exhaustive: n must be >= 1");
    if (n > 25) throw BudgetError("r3_exhaustive: n exceeds branch-and-bound budget 25");
    std::vector<int> current, best;
    std::uint32_t mask = 0;
    auto extends = [&](int c) {
        for (int b : current) {
            const int a = 2 * b - c;
            if (a >= 1 && (mask >> (a - 1)) & 1u) return false;
        }
        return true;
    };
    auto dfs = [&](auto&& self, int start) -> void {
        if (current.size() + static_cast<std::size_t>(n - start + 1) <= best.size()) return;
        if (start > n) {
            if (current.size() > best.size()) best = current;
            return;
        }
        if (extends(start)) {
            current.push_back(start);
            mask |= 1u << (start - 1);
            self(self, start + 1);
            mask &= ~(1u << (start - 1));
            current.pop_back();
        }
        self(self, start + 1);
    };
    dfs(dfs, 1);
    std::vector<LatticePoint> pts;
    pts.reserve(best.size());
    for (int v : best) pts.push_back({v});
    R3Result out;
    out.size = static_cast<std::int64_t>(best.size());
    out.witness = PointSet(1, std::move(pts));
    return out;
}

}  // namespace rsg
