#include "rsgraph/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rsgraph/parallel.hpp"
#include "rsgraph/probability.hpp"

namespace rsg {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::int64_t checked_pow(std::int64_t base, int exp, std::int64_t cap, const char* what) {
    std::int64_t v = 1;
    for (int i = 0; i < exp; ++i) {
        if (v > cap / base)
            throw BudgetError(std::string(what) + ": " + std::to_string(base) + "^" +
                              std::to_string(exp) + " exceeds budget " + std::to_string(cap));
        v *= base;
    }
    return v;
}

// one pass over X x Y accumulating a norm_color histogram of the pairs whose
// sum satisfies in_z; fixed row chunks keep the merge thread-count independent
template <class ZPred>
std::vector<std::int64_t> color_histogram(const PointSet& x, const PointSet& y, ZPred&& in_z,
                                          std::int64_t max_color, unsigned workers) {
    const int dim = x.dim();
    const std::size_t nx = x.size(), ny = y.size();
    constexpr std::size_t kChunkRows = 256;
    const std::size_t jobs = (nx + kChunkRows - 1) / kChunkRows;
    std::vector<std::vector<std::int64_t>> partial(jobs);
    parallel_for(jobs, workers, [&](std::size_t j) {
        std::vector<std::int64_t> hist(static_cast<std::size_t>(max_color) + 1, 0);
        std::vector<Coord> s(dim);
        const std::size_t lo = j * kChunkRows;
        const std::size_t hi = std::min(lo + kChunkRows, nx);
        for (std::size_t i = lo; i < hi; ++i) {
            const Coord* xp = x.point(i);
            for (std::size_t k = 0; k < ny; ++k) {
                const Coord* yp = y.point(k);
                for (int d = 0; d < dim; ++d) s[d] = xp[d] + yp[d];
                if (!in_z(s.data())) continue;
                ++hist[static_cast<std::size_t>(norm_color(xp, yp, dim))];
            }
        }
        partial[j] = std::move(hist);
    });
    std::vector<std::int64_t> hist(static_cast<std::size_t>(max_color) + 1, 0);
    for (const auto& p : partial)
        for (std::size_t c = 0; c < hist.size(); ++c) hist[c] += p[c];
    return hist;
}

template <class ZPred>
CornerSet collect_color_class(const PointSet& x, const PointSet& y, ZPred&& in_z,
                              std::int64_t color, unsigned workers) {
    const int dim = x.dim();
    const std::size_t nx = x.size(), ny = y.size();
    constexpr std::size_t kChunkRows = 256;
    const std::size_t jobs = (nx + kChunkRows - 1) / kChunkRows;
    std::vector<std::vector<std::pair<LatticePoint, LatticePoint>>> partial(jobs);
    parallel_for(jobs, workers, [&](std::size_t j) {
        std::vector<std::pair<LatticePoint, LatticePoint>> mine;
        std::vector<Coord> s(dim);
        const std::size_t lo = j * kChunkRows;
        const std::size_t hi = std::min(lo + kChunkRows, nx);
        for (std::size_t i = lo; i < hi; ++i) {
            const Coord* xp = x.point(i);
            for (std::size_t k = 0; k < ny; ++k) {
                const Coord* yp = y.point(k);
                for (int d = 0; d < dim; ++d) s[d] = xp[d] + yp[d];
                if (!in_z(s.data())) continue;
                if (norm_color(xp, yp, dim) != color) continue;
                mine.emplace_back(x.point_vec(i), y.point_vec(k));
            }
        }
        partial[j] = std::move(mine);
    });
    std::vector<std::pair<LatticePoint, LatticePoint>> all;
    for (auto& p : partial)
        for (auto& pr : p) all.push_back(std::move(pr));
    return CornerSet(dim, std::move(all));
}

struct Extracted {
    std::int64_t pair_count = 0;      // pairs before pigeonhole
    std::int64_t classes_present = 0;
    std::int64_t color = 0;
    CornerSet cornerfree;
};

template <class ZPred>
Extracted extract_largest_class(const PointSet& x, const PointSet& y, ZPred&& in_z,
                                std::int64_t max_color, unsigned workers) {
    Extracted e;
    if (x.empty() || y.empty()) return e;
    const auto hist = color_histogram(x, y, in_z, max_color, workers);
    std::int64_t best_color = -1, best_count = 0;
    for (std::size_t c = 0; c < hist.size(); ++c) {
        e.pair_count += hist[c];
        if (hist[c] > 0) ++e.classes_present;
        if (hist[c] > best_count) {  // ties resolved toward the smaller color
            best_count = hist[c];
            best_color = static_cast<std::int64_t>(c);
        }
    }
    if (best_color < 0) return e;
    e.color = best_color;
    e.cornerfree = collect_color_class(x, y, in_z, best_color, workers);
    if (static_cast<std::int64_t>(e.cornerfree.size()) != best_count)
        throw std::logic_error("extract_largest_class: collect disagrees with histogram");
    return e;
}

// builds graph + report from an extracted corner-free set
PipelineResult finish_construction(const CornerSet& a, std::int64_t n, ReportContext ctx,
                                   const PipelineConfig& cfg) {
    PipelineResult out;
    ctx.a = static_cast<std::int64_t>(a.size());
    switch (cfg.verify_level) {
        case VerifyLevel::full: ctx.verify_level = "full"; break;
        case VerifyLevel::sampled: ctx.verify_level = "sampled"; break;
        case VerifyLevel::off: ctx.verify_level = "off"; break;
    }
    if (!a.empty()) {
        auto built = build_tripartite(a, cfg.verify_level != VerifyLevel::off);
        if (std::holds_alternative<Witness>(built)) {
            out.witness = std::get<Witness>(built);
            out.report.ctx = ctx;
            return out;
        }
        Construction c = std::get<Construction>(std::move(built));
        out.graph = std::move(c.graph);
        out.system = std::move(c.system);
        if (auto w = verify_graph(out.graph, out.system, cfg.verify_level)) {
            out.witness = *w;
            out.report.ctx = ctx;
            return out;
        }
        ctx.triangle_count = static_cast<std::int64_t>(out.system.triples.size());
        ctx.verified = cfg.verify_level != VerifyLevel::off;
    } else {
        ctx.triangle_count = 0;
        ctx.verified = true;
    }
    if (3 * n > static_cast<std::int64_t>(out.graph.base_order()))
        out.graph.padded_order = static_cast<std::uint32_t>(3 * n);
    out.report = density_report(out.graph, n, ctx);
    return out;
}

}  // namespace

void PipelineConfig::validate() const {
    if (dim < 1) throw std::invalid_argument("pipeline: dim must be >= 1");
    if (budget_points < 1 || budget_pairs < 1)
        throw std::invalid_argument("pipeline: budgets must be positive");
    switch (kind) {
        case Kind::box:
            if (m < 2 || n != 0)
                throw std::invalid_argument("pipeline: box kind takes M (even, >= 2) and no n");
            if (m % 2 != 0) throw std::invalid_argument("pipeline: box M must be even");
            break;
        case Kind::ball:
            if (n < 1 || m != 0)
                throw std::invalid_argument("pipeline: ball kind takes n >= 1 and no M");
            if (shift_trials < 1)
                throw std::invalid_argument("pipeline: shift_trials must be >= 1");
            break;
        case Kind::abstract:
            if (n < 2 || m != 0)
                throw std::invalid_argument("pipeline: abstract kind takes n >= 2 and no M");
            break;
    }
}

// ---------------------------------------------------------------------------
// Box pipeline

PipelineResult run_box_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    const int dim = cfg.dim;
    const std::int64_t M = cfg.m;
    const std::int64_t m = M / 2;
    const std::int64_t n = checked_pow(M + 1, dim, cfg.budget_points, "box pipeline points");
    checked_pow(M + 1, 2 * dim, cfg.budget_pairs, "box pipeline pairs");
    if (3 * n > 0xffffffffLL) throw BudgetError("box pipeline: 3n exceeds vertex id range");

    // X = Y = {-M/2..M/2}^D + (M/2+1) = {1..M+1}^D; Z shifted one box further
    std::vector<Coord> flat;
    flat.reserve(static_cast<std::size_t>(n) * dim);
    std::vector<Coord> cur(dim, 1);
    for (;;) {
        flat.insert(flat.end(), cur.begin(), cur.end());
        int axis = dim - 1;
        while (axis >= 0 && cur[axis] == M + 1) cur[axis--] = 1;
        if (axis < 0) break;
        ++cur[axis];
    }
    const PointSet box = PointSet::from_sorted_flat(dim, std::move(flat));
    const Coord z_lo = m + 2, z_hi = 3 * m + 2;
    auto in_z = [dim, z_lo, z_hi](const Coord* s) {
        for (int d = 0; d < dim; ++d)
            if (s[d] < z_lo || s[d] > z_hi) return false;
        return true;
    };

    Extracted ext = extract_largest_class(box, box, in_z, dim * M * M, cfg.workers);
    // per-coordinate pair count is exact, so |A0| has a closed form
    const std::int64_t per_coord = (M + 1) * (M + 1) - m * (m + 1);
    std::int64_t expect = 1;
    for (int d = 0; d < dim; ++d) expect *= per_coord;
    if (ext.pair_count != expect)
        throw std::logic_error("box pipeline: pair count disagrees with the product formula");
    if (ext.pair_count > 0 &&
        ext.cornerfree.size() * static_cast<std::size_t>(ext.classes_present) < // pigeonhole
            static_cast<std::size_t>(ext.pair_count))
        throw std::logic_error("box pipeline: pigeonhole bound violated");

    ReportContext ctx;
    ctx.kind = "box";
    ctx.dim = dim;
    ctx.n = n;
    ctx.m = M;
    ctx.seed = cfg.seed;
    ctx.a0 = ext.pair_count;
    ctx.classes = ext.classes_present;
    ctx.x_size = ctx.y_size = ctx.z_size = n;
    ctx.pre_trim_pairs = ext.pair_count;
    ctx.post_trim_pairs = ext.pair_count;
    return finish_construction(ext.cornerfree, n, std::move(ctx), cfg);
}

// ---------------------------------------------------------------------------
// Ball pipeline

PipelineResult run_ball_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    const int dim = cfg.dim;
    const std::int64_t n = cfg.n;
    const double r = radius_for_volume(dim, static_cast<double>(n));
    const BallSpec ball = BallSpec::origin(dim, r);

    const ProbabilityEstimate closure =
        mc_ball_closure(dim, cfg.closure_samples, derive_seed(cfg.seed, 0x6261736bull), cfg.workers);
    const double target = closure.value * static_cast<double>(n) * static_cast<double>(n);

    const ShiftProblem problem{ball, ball, ball};
    const ShiftResult shift = find_good_shift(problem, target, cfg.shift_trials, cfg.seed,
                                              cfg.budget_points, cfg.budget_pairs, cfg.workers);
    const std::int64_t recount =
        pair_count_for_shift(problem, shift.shift_num, cfg.budget_points, cfg.budget_pairs);
    if (recount != shift.count)
        throw std::logic_error("ball pipeline: shift count failed the independent recount");

    const std::vector<std::int64_t> t1(shift.shift_num.begin(), shift.shift_num.begin() + dim);
    const std::vector<std::int64_t> t2(shift.shift_num.begin() + dim, shift.shift_num.end());
    std::vector<std::int64_t> t12(dim);
    for (int d = 0; d < dim; ++d) t12[d] = t1[d] + t2[d];
    PointSet x_set = enumerate_ball(ball.shifted(t1), cfg.budget_points);
    PointSet y_set = enumerate_ball(ball.shifted(t2), cfg.budget_points);
    PointSet z_set = enumerate_ball(ball.shifted(t12), cfg.budget_points);

    ReportContext ctx;
    ctx.kind = "ball";
    ctx.dim = dim;
    ctx.n = n;
    ctx.radius = r;
    ctx.seed = cfg.seed;
    ctx.shift_trials = cfg.shift_trials;
    ctx.x_size = static_cast<std::int64_t>(x_set.size());
    ctx.y_size = static_cast<std::int64_t>(y_set.size());
    ctx.z_size = static_cast<std::int64_t>(z_set.size());
    ctx.a0 = shift.count;
    ctx.pre_trim_pairs = shift.count;
    ctx.size_bound_2n_held = ctx.x_size <= 2 * n && ctx.y_size <= 2 * n && ctx.z_size <= 2 * n;
    ctx.shift.reserve(shift.shift_num.size());
    for (std::int64_t s : shift.shift_num)
        ctx.shift.push_back(static_cast<double>(s) / kShiftScale);
    ctx.shift_target = target;
    ctx.shift_achieved = shift.achieved;

    // deterministic trim: each oversize set splits into two sorted halves; the
    // best of the <= 8 half-combinations keeps at least 1/8 of the pairs
    std::int64_t post = shift.count;
    std::int64_t rounds = 0;
    while (static_cast<std::int64_t>(x_set.size()) > n ||
           static_cast<std::int64_t>(y_set.size()) > n ||
           static_cast<std::int64_t>(z_set.size()) > n) {
        if (++rounds > 4) throw BudgetError("ball pipeline: trim failed to reach size n");
        const bool sx = static_cast<std::int64_t>(x_set.size()) > n;
        const bool sy = static_cast<std::int64_t>(y_set.size()) > n;
        const bool sz = static_cast<std::int64_t>(z_set.size()) > n;
        const std::size_t xmid = (x_set.size() + 1) / 2;
        const std::size_t ymid = (y_set.size() + 1) / 2;
        const std::size_t zmid = (z_set.size() + 1) / 2;
        constexpr std::size_t kChunkRows = 256;
        const std::size_t jobs = (x_set.size() + kChunkRows - 1) / kChunkRows;
        std::vector<std::array<std::int64_t, 8>> partial(jobs, {0, 0, 0, 0, 0, 0, 0, 0});
        parallel_for(jobs, cfg.workers, [&](std::size_t j) {
            std::vector<Coord> s(dim);
            auto& mine = partial[j];
            const std::size_t lo = j * kChunkRows;
            const std::size_t hi = std::min(lo + kChunkRows, x_set.size());
            for (std::size_t i = lo; i < hi; ++i) {
                const Coord* xp = x_set.point(i);
                const int xbit = (sx && i >= xmid) ? 1 : 0;
                for (std::size_t k = 0; k < y_set.size(); ++k) {
                    const Coord* yp = y_set.point(k);
                    for (int d = 0; d < dim; ++d) s[d] = xp[d] + yp[d];
                    const std::size_t zi = z_set.find(s.data());
                    if (zi == PointSet::npos) continue;
                    const int ybit = (sy && k >= ymid) ? 1 : 0;
                    const int zbit = (sz && zi >= zmid) ? 1 : 0;
                    ++mine[static_cast<std::size_t>(xbit << 2 | ybit << 1 | zbit)];
                }
            }
        });
        std::array<std::int64_t, 8> combo{};
        for (const auto& p : partial)
            for (int c = 0; c < 8; ++c) combo[static_cast<std::size_t>(c)] += p[static_cast<std::size_t>(c)];
        std::int64_t total = 0;
        for (std::int64_t c : combo) total += c;
        if (total != post)
            throw std::logic_error("ball pipeline: trim pass lost pairs");
        int best = 0;
        for (int c = 1; c < 8; ++c)
            if (combo[static_cast<std::size_t>(c)] > combo[static_cast<std::size_t>(best)]) best = c;
        // every surviving triple lives in exactly one combination
        if (8 * combo[static_cast<std::size_t>(best)] < total)
            throw std::logic_error("ball pipeline: trim lost more than 7/8 of the pairs");
        if (sx) x_set = (best & 4) ? x_set.slice(xmid, x_set.size()) : x_set.slice(0, xmid);
        if (sy) y_set = (best & 2) ? y_set.slice(ymid, y_set.size()) : y_set.slice(0, ymid);
        if (sz) z_set = (best & 1) ? z_set.slice(zmid, z_set.size()) : z_set.slice(0, zmid);
        post = combo[static_cast<std::size_t>(best)];
    }
    ctx.trim_rounds = rounds;
    ctx.post_trim_pairs = post;

    if (post == 0 || x_set.empty() || y_set.empty()) {
        ctx.classes = 0;
        return finish_construction(CornerSet(), n, std::move(ctx), cfg);
    }

    // translate into the positive orthant: X by u, Y by v, Z must move by u+v
    // to preserve the pair sums
    const LatticePoint xmin = x_set.coordinate_min();
    const LatticePoint ymin = y_set.coordinate_min();
    LatticePoint u(dim), v(dim), uv(dim);
    for (int d = 0; d < dim; ++d) {
        u[d] = 1 - xmin[d];
        v[d] = 1 - ymin[d];
        uv[d] = u[d] + v[d];
    }
    const PointSet x1 = x_set.translated(u);
    const PointSet y1 = y_set.translated(v);
    const PointSet z1 = z_set.translated(uv);
    Coord max_coord = 1;
    for (const PointSet* s : {&x1, &y1}) {
        const LatticePoint mx = s->coordinate_max();
        for (int d = 0; d < dim; ++d) max_coord = std::max(max_coord, mx[d]);
    }
    const std::int64_t m_val = max_coord - 1;  // X, Y now live in [M+1]^D
    ctx.m = m_val;

    Extracted ext = extract_largest_class(
        x1, y1, [&z1](const Coord* s) { return z1.contains(s); }, dim * m_val * m_val,
        cfg.workers);
    if (ext.pair_count != post)
        throw std::logic_error("ball pipeline: translation changed the pair count");
    ctx.classes = ext.classes_present;
    return finish_construction(ext.cornerfree, n, std::move(ctx), cfg);
}

// ---------------------------------------------------------------------------
// Abstract pipeline

namespace {

// #{(x,y) in [n]^2 : x - y = d, x + y in [n]}
std::int64_t pairs_with_difference(std::int64_t d, std::int64_t n) {
    const std::int64_t lo = std::max({std::int64_t{1}, 1 - d, ceil_div(2 - d, 2)});
    const std::int64_t hi = std::min({n, n - d, floor_div(n - d, 2)});
    return hi >= lo ? hi - lo + 1 : 0;
}

}  // namespace

PipelineResult run_abstract_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    const std::int64_t n = cfg.n;
    const PointSet w0 = n <= 25 ? r3_exhaustive(static_cast<int>(n)).witness
                                : behrend_set(n);
    std::int64_t best_t = -2 * n, best_count = -1;
    for (std::int64_t t = -2 * n; t <= n; ++t) {
        std::int64_t count = 0;
        for (std::size_t i = 0; i < w0.size(); ++i)
            count += pairs_with_difference(w0.point(i)[0] + t, n);
        if (count > best_count) {
            best_count = count;
            best_t = t;
        }
    }
    if (best_count > cfg.budget_points)
        throw BudgetError("abstract pipeline: " + std::to_string(best_count) +
                          " pairs exceed the point budget " + std::to_string(cfg.budget_points));
    std::vector<std::pair<LatticePoint, LatticePoint>> pairs;
    pairs.reserve(static_cast<std::size_t>(best_count));
    for (std::size_t i = 0; i < w0.size(); ++i) {
        const std::int64_t d = w0.point(i)[0] + best_t;
        const std::int64_t lo = std::max({std::int64_t{1}, 1 - d, ceil_div(2 - d, 2)});
        const std::int64_t hi = std::min({n, n - d, floor_div(n - d, 2)});
        for (std::int64_t y = lo; y <= hi; ++y) pairs.push_back({{y + d}, {y}});
    }
    CornerSet a(1, std::move(pairs));
    if (static_cast<std::int64_t>(a.size()) != best_count)
        throw std::logic_error("abstract pipeline: materialized pairs disagree with the t-scan");

    ReportContext ctx;
    ctx.kind = "abstract";
    ctx.dim = 1;
    ctx.n = n;
    ctx.seed = cfg.seed;
    ctx.a0 = best_count;
    ctx.classes = 1;  // the whole pair set is corner-free, no pigeonhole step
    ctx.x_size = ctx.y_size = ctx.z_size = n;
    ctx.pre_trim_pairs = best_count;
    ctx.post_trim_pairs = best_count;
    ctx.w0_size = static_cast<std::int64_t>(w0.size());
    ctx.best_t = best_t;
    ctx.p_hat = Fraction(best_count, n * n);
    ctx.p_reference = Fraction(ctx.w0_size, 4 * (3 * n + 1));

    if (cfg.verify_level != VerifyLevel::off) {
        if (auto w = is_corner_free(a)) {
            PipelineResult out;
            out.witness = *w;
            out.report.ctx = ctx;
            return out;
        }
    }
    return finish_construction(a, n, std::move(ctx), cfg);
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    switch (cfg.kind) {
        case PipelineConfig::Kind::box: return run_box_pipeline(cfg);
        case PipelineConfig::Kind::ball: return run_ball_pipeline(cfg);
        case PipelineConfig::Kind::abstract: return run_abstract_pipeline(cfg);
    }
    throw std::invalid_argument("run_pipeline: unknown kind");
}

// ---------------------------------------------------------------------------
// Sweep

std::vector<SweepCell> sweep(const PipelineConfig& base, const std::vector<int>& dims,
                             const std::vector<std::int64_t>& sizes) {
    if (sizes.empty()) throw std::invalid_argument("sweep: size range must be nonempty");
    std::vector<int> dim_range = dims;
    if (base.kind == PipelineConfig::Kind::abstract) dim_range = {1};
    if (dim_range.empty()) throw std::invalid_argument("sweep: dim range must be nonempty");
    std::vector<SweepCell> cells;
    for (int d : dim_range) {
        for (std::int64_t s : sizes) {
            SweepCell cell;
            cell.cfg = base;
            cell.cfg.dim = d;
            if (base.kind == PipelineConfig::Kind::box) {
                cell.cfg.m = s;
                cell.cfg.n = 0;
            } else {
                cell.cfg.n = s;
                cell.cfg.m = 0;
            }
            try {
                PipelineResult r = run_pipeline(cell.cfg);
                if (r.witness)
                    cell.error = "verification failed: " + r.witness->describe();
                else
                    cell.report = std::move(r.report);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::ostringstream os;
    os << "kind,D,n,M,seed,A0,classes,A,edges,triangles,eta_lower,"
          "theory_behrend,theory_green,theory_new,verified\n";
    os.precision(12);
    auto kind_name = [](PipelineConfig::Kind k) {
        switch (k) {
            case PipelineConfig::Kind::box: return "box";
            case PipelineConfig::Kind::ball: return "ball";
            case PipelineConfig::Kind::abstract: return "abstract";
        }
        return "?";
    };
    for (const auto& cell : cells) {
        if (cell.report) {
            const DensityReport& r = *cell.report;
            os << r.ctx.kind << "," << r.ctx.dim << "," << r.ctx.n << "," << r.ctx.m << ","
               << r.ctx.seed << "," << r.ctx.a0 << "," << r.ctx.classes << "," << r.ctx.a << ","
               << r.edge_count << "," << r.ctx.triangle_count << "," << r.eta_lower.value() << ","
               << r.theory_behrend << "," << r.theory_green << "," << r.theory_new << ","
               << (r.ctx.verified ? "true" : "false") << "\n";
        } else {
            std::string msg = cell.error;
            for (char& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            os << kind_name(cell.cfg.kind) << "," << cell.cfg.dim << "," << cell.cfg.n << ","
               << cell.cfg.m << "," << cell.cfg.seed << ",0,0,0,0,0,0,0,0,0,error:" << msg << "\n";
        }
    }
    return os.str();
}

nlohmann::json sweep_json(const std::vector<SweepCell>& cells) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& cell : cells) {
        if (cell.report) {
            rows.push_back(cell.report->to_json());
        } else {
            rows.push_back(nlohmann::json{{"error", cell.error},
                                          {"dim", cell.cfg.dim},
                                          {"n", cell.cfg.n},
                                          {"m", cell.cfg.m}});
        }
    }
    return nlohmann::json{{"cells", rows}};
}

}  // namespace rsg
