#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lbp/core.hpp"

namespace lbp {

// (u + sqrt(u(4-3u)))/2 on [0,1]; std::domain_error elsewhere.
double beta(double u);

// g(z) = -log beta(1 - e^{-z}) and f(z) = -log(1 - e^{-z}), z > 0.
double rate_g(double z);
double rate_f(double z);
double rate_function(double z, Variant variant);

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;
    int evaluations = 0;
};

// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b]. The error
// bound is the sum of |Kronrod - Gauss| over the final partition.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    int max_intervals = 4000);

// Integral of the variant's rate function over (0, infinity). Dyadic panels from
// 1e-12 up to 1, one adaptive panel on [1, 40], the log-singular head on (0, 1e-12]
// from its leading term, and the tail beyond 40 as an analytic bound.
QuadratureResult lambda_integral(Variant variant, double tolerance = 1e-10);

// Integral of the rate function over [lo, hi], 0 < lo <= hi.
QuadratureResult rate_integral(Variant variant, double lo, double hi, double tolerance = 1e-12);

enum class GapMode { DoubleGap, SingleGap };

constexpr GapMode gap_mode(Variant v) { return v.forbids_single_gaps() ? GapMode::SingleGap : GapMode::DoubleGap; }

// Probability that no two adjacent (DoubleGap) or no single (SingleGap) of n
// independent lines is empty, each line empty with probability empty_prob.
// Linear-time recursion carried in the log domain.
double log_no_double_gap_exact(std::int64_t n, double empty_prob, GapMode mode);
double no_double_gap_exact(std::int64_t n, double empty_prob, GapMode mode);

// Upper bound on the no-gap probability for the a columns of an a x b rectangle:
// exp(-(a-1) g(bq)) standard, exp(-a f(bq)) otherwise.
double log_double_gap_bound(std::int64_t a, std::int64_t b, double q, Variant variant);
double double_gap_bound(std::int64_t a, std::int64_t b, double q, Variant variant);

// Bound on the frame event between nested rectangles of dims (a,b) and (a+s, b+t).
double log_border_bound(std::int64_t a, std::int64_t b, std::int64_t s, std::int64_t t, double q, Variant variant);
double border_bound(std::int64_t a, std::int64_t b, std::int64_t s, std::int64_t t, double q, Variant variant);

// Piecewise-linear path in (0, inf)^2, non-decreasing in both coordinates.
class MonotonePath {
public:
    using Point = std::pair<double, double>;

    explicit MonotonePath(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const { return vertices_; }

private:
    std::vector<Point> vertices_;
};

// Line integral of g(y) dx + g(x) dy (f for the variants) along the path.
double path_weight(const MonotonePath& path, Variant variant, double tolerance = 1e-12);

struct Envelope {
    double lower = 0.0;
    double upper = 0.0;
};

// exp((-2 lambda + c sqrt p)/p) and exp((-2 lambda + C sqrt p (log 1/p)^k)/p),
// k = 3 for standard and modified, 2 for Froböse.
Envelope envelope(double p, double c_lower, double c_upper, Variant variant);

struct ScaleConstants {
    double p = 0.0;
    double q = 0.0;       // -log(1-p)
    std::int64_t A = 0;   // ceil(1/sqrt q)
    std::int64_t B = 0;   // floor(q^-1 log q^-1)
    bool in_regime = true;  // p < 0.1
    std::string warning;
};

double q_of(double p);
std::int64_t scale_A(double q);
std::int64_t scale_B(double q);

// Requires 0 < p < 1. For p >= 0.1 the constants are still returned, with
// in_regime = false and a warning.
ScaleConstants scale_constants(double p);

}  // namespace lbp
