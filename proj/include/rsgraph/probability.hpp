#pragma once

#include <cstdint>
#include <functional>

#include "rsgraph/common.hpp"
#include "rsgraph/rng.hpp"

namespace rsg {

enum class EstimateMethod { exact, monte_carlo, quadrature };

struct ProbabilityEstimate {
    double value = 0.0;
    double stderr_value = 0.0;  // sqrt(p(1-p)/samples) for Monte Carlo, 0 otherwise
    std::int64_t samples = 0;
    EstimateMethod method = EstimateMethod::exact;
    double quad_error = 0.0;  // quadrature error bound, <= 1e-9
    std::int64_t band_discards = 0;
    std::int64_t identity_violations = 0;
};

const char* method_name(EstimateMethod m);

// P(a + b in {-m,...,m}) for a, b independent uniform on {-m,...,m}, by exact
// integer convolution. Equals 1 - m(m+1)/(2m+1)^2; decreasing with limit 3/4.
Fraction box_sum_probability(std::int64_t m);

// Normalized isotropic Gaussian; ||out||_2 = 1 to 1e-12.
void sample_unit_sphere(int dim, Rng& rng, double* out);
// Sphere sample scaled by U^{1/dim}.
void sample_unit_ball(int dim, Rng& rng, double* out);

// Monte-Carlo estimate of P(x + y in B) for x, y independent uniform in the
// unit ball. Fixed-size sample chunks with per-chunk derived seeds make the
// result identical for any worker count.
ProbabilityEstimate mc_ball_closure(int dim, std::int64_t samples, std::uint64_t seed,
                                    unsigned workers = 0);

// Monte-Carlo estimate of P(<u,v> <= -1/2) for u, v uniform on S^{dim-1}.
// Per sample, the indicator identity [||u+v|| <= 1] = [<u,v> <= -1/2] is
// checked; samples inside a 1e-9 band around the boundary are discarded and
// counted, disagreements outside the band are counted as violations.
ProbabilityEstimate mc_sphere_closure(int dim, std::int64_t samples, std::uint64_t seed,
                                      unsigned workers = 0);

// Density of <u,v> for independent uniform unit vectors:
// Gamma(D/2) / (sqrt(pi) Gamma((D-1)/2)) * (1-r^2)^{(D-3)/2} on |r| < 1.
double dot_pdf(int dim, double r);

// integral of dot_pdf over [-1, -1/2] by adaptive quadrature (abs err <= 1e-9);
// computed in the angle variable where the integrand is smooth.
ProbabilityEstimate exact_sphere_closure(int dim);

// integral of dot_pdf over [-1, 1]; should be 1.
double dot_pdf_normalization(int dim);

// integral of (1-r^2)^{D/2} over [-1, -1/2]; the result is checked against the
// closed-form floor (1/D)(3/4 - 1/D)^{D/2} which it always dominates.
double lower_bound_integral(int dim);

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;
    std::int64_t evaluations = 0;
    bool converged = false;
};

// Adaptive Simpson bisection with embedded error estimate.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol = 1e-9, int max_depth = 48);

// The three exponential-only families (1/2)^D n^{-2/D}, (3/4)^D n^{-2/D},
// (3/4)^{D/2} n^{-2/D}; polynomial-in-D factors are intentionally dropped.
struct TheoryCurves {
    double behrend = 0.0;
    double green = 0.0;
    double ball = 0.0;
};
TheoryCurves theory_curves(int dim, double n);

enum class CurveKind { behrend, green, ball };
double theory_curve_value(CurveKind curve, int dim, double n);

struct OptimizeResult {
    int d_best = 0;
    double value = 0.0;
    double d_analytic = 0.0;  // continuous optimum 2 sqrt(ln n / ln(1/base))
};

// Grid search over D in {1, ..., ceil(8 sqrt(log2 n))}.
OptimizeResult optimize_D(std::int64_t n, CurveKind curve);

struct DeltaBound {
    double epsilon = 0.0;
    std::int64_t n_max = 0;
    double delta = 0.0;  // 1 / n_max
};

// Largest n with eta_curve(n) >= 3*epsilon (binary search; eta_curve must be
// nonincreasing); throws std::domain_error when no n >= 1 qualifies.
DeltaBound eta_to_delta(const std::function<double(std::int64_t)>& eta_curve, double epsilon);

// Reference exponent constants for the delta(eps) asymptotics, as reported.
double removal_constant_new();  // 1.6601...
double removal_constant_old();  // 0.8301...

}  // namespace rsg
