#include "rsgraph/probability.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rsgraph/parallel.hpp"

namespace rsg {

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr std::int64_t kMcChunk = 1 << 15;  // fixed chunking: thread-count independent
constexpr double kBandTol = 1e-9;

double log_dot_pdf_prefactor(int dim) {
    return std::lgamma(dim / 2.0) - 0.5 * std::log(kPi) - std::lgamma((dim - 1) / 2.0);
}

struct McCounts {
    std::int64_t hits = 0;
    std::int64_t discards = 0;
    std::int64_t violations = 0;
};

template <class PerChunk>
McCounts mc_run(std::int64_t samples, std::uint64_t seed, unsigned workers, PerChunk&& chunk_fn) {
    if (samples < 1) throw std::invalid_argument("monte carlo: samples must be >= 1");
    const std::size_t chunks =
        static_cast<std::size_t>((samples + kMcChunk - 1) / kMcChunk);
    std::vector<McCounts> partial(chunks);
    parallel_for(chunks, workers, [&](std::size_t c) {
        const std::int64_t lo = static_cast<std::int64_t>(c) * kMcChunk;
        const std::int64_t count = std::min<std::int64_t>(kMcChunk, samples - lo);
        Rng rng(derive_seed(seed, c));
        partial[c] = chunk_fn(rng, count);
    });
    McCounts total;
    for (const auto& p : partial) {
        total.hits += p.hits;
        total.discards += p.discards;
        total.violations += p.violations;
    }
    return total;
}

ProbabilityEstimate finish_mc(const McCounts& c, std::int64_t samples) {
    ProbabilityEstimate e;
    e.method = EstimateMethod::monte_carlo;
    e.samples = samples - c.discards;
    e.band_discards = c.discards;
    e.identity_violations = c.violations;
    if (e.samples > 0) {
        e.value = static_cast<double>(c.hits) / static_cast<double>(e.samples);
        e.stderr_value = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(e.samples));
    }
    return e;
}

}  // namespace

const char* method_name(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::exact: return "exact";
        case EstimateMethod::monte_carlo: return "monte-carlo";
        case EstimateMethod::quadrature: return "quadrature";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Box sums

Fraction box_sum_probability(std::int64_t m) {
    if (m < 0) throw std::invalid_argument("box_sum_probability: m must be >= 0");
    if (m > 1'000'000) throw BudgetError("box_sum_probability: m exceeds convolution budget 1e6");
    // distribution of a+b via convolution of two uniform {-m..m} indicators;
    // by symmetry only the multiplicities matter
    const std::int64_t width = 2 * m + 1;
    std::int64_t inside = 0;
    for (std::int64_t s = -2 * m; s <= 2 * m; ++s) {
        // multiplicity of sum s among pairs
        const std::int64_t mult = width - (s < 0 ? -s : s);
        if (s >= -m && s <= m) inside += mult;
    }
    return Fraction(inside, width * width);
}

// ---------------------------------------------------------------------------
// Samplers

void sample_unit_sphere(int dim, Rng& rng, double* out) {
    if (dim < 1) throw std::invalid_argument("sample_unit_sphere: dim must be >= 1");
    for (;;) {
        double norm_sq = 0.0;
        for (int i = 0; i < dim; ++i) {
            out[i] = rng.next_gaussian();
            norm_sq += out[i] * out[i];
        }
        if (norm_sq > 1e-24) {
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (int i = 0; i < dim; ++i) out[i] *= inv;
            return;
        }
    }
}

void sample_unit_ball(int dim, Rng& rng, double* out) {
    sample_unit_sphere(dim, rng, out);
    const double scale = std::pow(1.0 - rng.next_unit(), 1.0 / dim);  // U^(1/D), U in (0,1]
    for (int i = 0; i < dim; ++i) out[i] *= scale;
}

// ---------------------------------------------------------------------------
// Monte Carlo closures

ProbabilityEstimate mc_ball_closure(int dim, std::int64_t samples, std::uint64_t seed,
                                    unsigned workers) {
    if (dim < 1) throw std::invalid_argument("mc_ball_closure: dim must be >= 1");
    const McCounts c = mc_run(samples, seed, workers, [dim](Rng& rng, std::int64_t count) {
        std::vector<double> x(dim), y(dim);
        McCounts out;
        for (std::int64_t i = 0; i < count; ++i) {
            sample_unit_ball(dim, rng, x.data());
            sample_unit_ball(dim, rng, y.data());
            double s = 0.0;
            for (int d = 0; d < dim; ++d) {
                const double v = x[d] + y[d];
                s += v * v;
            }
            if (s <= 1.0) ++out.hits;
        }
        return out;
    });
    return finish_mc(c, samples);
}

ProbabilityEstimate mc_sphere_closure(int dim, std::int64_t samples, std::uint64_t seed,
                                      unsigned workers) {
    if (dim < 2) throw std::invalid_argument("mc_sphere_closure: dim must be >= 2");
    const McCounts c = mc_run(samples, seed, workers, [dim](Rng& rng, std::int64_t count) {
        std::vector<double> u(dim), v(dim);
        McCounts out;
        for (std::int64_t i = 0; i < count; ++i) {
            sample_unit_sphere(dim, rng, u.data());
            sample_unit_sphere(dim, rng, v.data());
            double dot = 0.0, sum_sq = 0.0;
            for (int d = 0; d < dim; ++d) {
                dot += u[d] * v[d];
                const double s = u[d] + v[d];
                sum_sq += s * s;
            }
            if (std::abs(dot + 0.5) <= kBandTol) {
                ++out.discards;
                continue;
            }
            const bool by_dot = dot <= -0.5;
            const bool by_norm = sum_sq <= 1.0;  // ||u+v||^2 = 2 + 2<u,v>
            if (by_dot != by_norm) ++out.violations;
            if (by_dot) ++out.hits;
        }
        return out;
    });
    return finish_mc(c, samples);
}

// ---------------------------------------------------------------------------
// Dot-product density and quadrature

double dot_pdf(int dim, double r) {
    if (dim < 2) throw std::invalid_argument("dot_pdf: dim must be >= 2");
    if (!(std::abs(r) < 1.0)) return 0.0;
    const double log_pref = log_dot_pdf_prefactor(dim);
    return std::exp(log_pref + 0.5 * (dim - 3) * std::log1p(-r * r));
}

namespace {

struct QuadWork {
    const std::function<double(double)>* f;
    int max_depth;
    std::int64_t evaluations = 0;
    double error_accum = 0.0;
    bool depth_hit = false;

    double recurse(double a, double fa, double b, double fb, double m, double fm, double whole,
                   double eps, int depth) {
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = (*f)(lm), frm = (*f)(rm);
        evaluations += 2;
        const double h = b - a;
        const double left = h / 12.0 * (fa + 4.0 * flm + fm);
        const double right = h / 12.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * eps || depth >= max_depth) {
            if (depth >= max_depth && std::abs(delta) > 15.0 * eps) depth_hit = true;
            error_accum += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        return recurse(a, fa, m, fm, lm, flm, left, eps / 2.0, depth + 1) +
               recurse(m, fm, b, fb, rm, frm, right, eps / 2.0, depth + 1);
    }
};

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_depth) {
    QuadWork w;
    w.f = &f;
    w.max_depth = max_depth;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    w.evaluations = 3;
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    QuadratureResult r;
    r.value = w.recurse(a, fa, b, fb, m, fm, whole, abs_tol, 0);
    r.error_bound = w.error_accum;
    r.evaluations = w.evaluations;
    r.converged = !w.depth_hit && w.error_accum <= abs_tol * 4.0;
    return r;
}

ProbabilityEstimate exact_sphere_closure(int dim) {
    if (dim < 2) throw std::invalid_argument("exact_sphere_closure: dim must be >= 2");
    // substitute r = -cos(theta): the density's (1-r^2)^{(D-3)/2} endpoint
    // singularity turns into the smooth integrand sin^{D-2}(theta) on [0, pi/3].
    // The integrand is normalized by its maximum sin(pi/3)^{D-2} so the
    // absolute quadrature tolerance acts relatively even at large D.
    const double pref = std::exp(log_dot_pdf_prefactor(dim));
    const double peak = std::sin(kPi / 3.0);
    const QuadratureResult q = integrate_adaptive(
        [dim, peak](double th) { return std::pow(std::sin(th) / peak, dim - 2); }, 0.0,
        kPi / 3.0, 1e-12, 48);
    const double scale = pref * std::pow(peak, dim - 2);
    if (!q.converged || std::min(scale, 1.0) * q.error_bound > 1e-9)
        throw std::runtime_error("exact_sphere_closure: quadrature failed to converge");
    ProbabilityEstimate e;
    e.method = EstimateMethod::quadrature;
    e.value = scale * q.value;
    e.samples = q.evaluations;
    e.quad_error = scale * q.error_bound;
    return e;
}

double dot_pdf_normalization(int dim) {
    if (dim < 2) throw std::invalid_argument("dot_pdf_normalization: dim must be >= 2");
    // same substitution; the exact endpoint values are the analytic limits of
    // dot_pdf(-cos th) * sin th, which round-trip through cos/sqrt would spoil
    const double endpoint_limit = dim == 2 ? std::exp(log_dot_pdf_prefactor(2)) : 0.0;
    const auto integrand = [dim, endpoint_limit](double th) {
        if (th <= 0.0 || th >= kPi) return endpoint_limit;
        return dot_pdf(dim, -std::cos(th)) * std::sin(th);
    };
    const QuadratureResult q = integrate_adaptive(integrand, 0.0, kPi, 1e-9, 48);
    if (!q.converged) throw std::runtime_error("dot_pdf_normalization: quadrature failed");
    return q.value;
}

double lower_bound_integral(int dim) {
    if (dim < 2) throw std::invalid_argument("lower_bound_integral: dim must be >= 2");
    // integrate (1-r^2)^{D/2} over [-1,-1/2] in the angle variable:
    // r = -cos(theta) gives sin^{D+1}(theta) on [0, pi/3], smooth at both
    // ends; normalized by the peak value so the tolerance acts relatively
    const double peak = std::sin(kPi / 3.0);
    const QuadratureResult q = integrate_adaptive(
        [dim, peak](double th) { return std::pow(std::sin(th) / peak, dim + 1); }, 0.0,
        kPi / 3.0, 1e-12, 48);
    if (!q.converged) throw std::runtime_error("lower_bound_integral: quadrature failed");
    const double value = q.value * std::pow(peak, dim + 1);
    const double floor_value = (1.0 / dim) * std::pow(0.75 - 1.0 / dim, dim / 2.0);
    if (value < floor_value * (1.0 - 1e-9))
        throw std::logic_error("lower_bound_integral: closed-form floor violated");
    return value;
}

// ---------------------------------------------------------------------------
// Theory curves

TheoryCurves theory_curves(int dim, double n) {
    if (dim < 1 || n < 1) throw std::invalid_argument("theory_curves: need dim >= 1, n >= 1");
    TheoryCurves c;
    const double decay = std::pow(n, -2.0 / dim);
    c.behrend = std::pow(0.5, dim) * decay;
    c.green = std::pow(0.75, dim) * decay;
    c.ball = std::pow(0.75, dim / 2.0) * decay;
    return c;
}

double theory_curve_value(CurveKind curve, int dim, double n) {
    const TheoryCurves c = theory_curves(dim, n);
    switch (curve) {
        case CurveKind::behrend: return c.behrend;
        case CurveKind::green: return c.green;
        case CurveKind::ball: return c.ball;
    }
    return 0.0;
}

OptimizeResult optimize_D(std::int64_t n, CurveKind curve) {
    if (n < 2) throw std::invalid_argument("optimize_D: n must be >= 2");
    const double log2n = std::log2(static_cast<double>(n));
    const int d_max = static_cast<int>(std::ceil(8.0 * std::sqrt(log2n)));
    OptimizeResult r;
    r.d_best = 1;
    r.value = theory_curve_value(curve, 1, static_cast<double>(n));
    for (int d = 2; d <= d_max; ++d) {
        const double v = theory_curve_value(curve, d, static_cast<double>(n));
        if (v > r.value) {
            r.value = v;
            r.d_best = d;
        }
    }
    double log_inv_base = 0.0;
    switch (curve) {
        case CurveKind::behrend: log_inv_base = std::log(2.0); break;
        case CurveKind::green: log_inv_base = std::log(4.0 / 3.0); break;
        case CurveKind::ball: log_inv_base = 0.5 * std::log(4.0 / 3.0); break;
    }
    r.d_analytic = std::sqrt(2.0 * std::log(static_cast<double>(n)) / log_inv_base);
    return r;
}

DeltaBound eta_to_delta(const std::function<double(std::int64_t)>& eta_curve, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0 / 3.0))
        throw std::invalid_argument("eta_to_delta: epsilon must satisfy 0 < eps < 1/3");
    const double threshold = 3.0 * epsilon;
    if (eta_curve(1) < threshold)
        throw std::domain_error("eta_to_delta: no n >= 1 reaches the threshold");
    std::int64_t lo = 1, hi = 2;
    const std::int64_t cap = std::int64_t{1} << 62;
    while (hi < cap && eta_curve(hi) >= threshold) {
        lo = hi;
        hi *= 2;
    }
    // invariant: eta(lo) >= threshold > eta(hi)  (or hi hit the cap)
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (eta_curve(mid) >= threshold)
            lo = mid;
        else
            hi = mid;
    }
    DeltaBound d;
    d.epsilon = epsilon;
    d.n_max = lo;
    d.delta = 1.0 / static_cast<double>(lo);
    return d;
}

double removal_constant_new() { return 4.0 * std::log2(4.0 / 3.0); }
double removal_constant_old() { return 2.0 * std::log2(4.0 / 3.0); }

}  // namespace rsg
