#include "lbp/analytics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace lbp {

double beta(double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("beta: argument must lie in [0,1]");
    return (u + std::sqrt(u * (4.0 - 3.0 * u))) / 2.0;
}

double rate_g(double z) {
    if (!(z > 0.0)) throw std::domain_error("rate function requires z > 0");
    const double w = std::exp(-z);    // 1 - u
    const double u = -std::expm1(-z);
    const double s = std::sqrt(u * (1.0 + 3.0 * w));  // sqrt(u(4-3u))
    const double b = (u + s) / 2.0;
    if (b < 0.5) return -std::log(b);
    // beta - 1 = (-w + (s - 1))/2 with s - 1 = w(2-3w)/(s+1)
    const double bm1 = (-w + w * (2.0 - 3.0 * w) / (s + 1.0)) / 2.0;
    return -std::log1p(bm1);
}

double rate_f(double z) {
    if (!(z > 0.0)) throw std::domain_error("rate function requires z > 0");
    if (z < std::numbers::ln2) return -std::log(-std::expm1(-z));
    return -std::log1p(-std::exp(-z));
}

double rate_function(double z, Variant variant) {
    return variant.rate() == RateKind::G ? rate_g(z) : rate_f(z);
}

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double sum = f(c - dx) + f(c + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    kronrod *= h;
    gauss *= h;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    int max_intervals) {
    if (a == b) return {};
    if (!(a < b)) throw std::invalid_argument("integrate_adaptive: require a <= b");
    std::priority_queue<Panel> panels;
    panels.push(gk15(f, a, b));
    double value = panels.top().value, error = panels.top().error;
    int evaluations = 15;
    while (error > abs_tol && static_cast<int>(panels.size()) < max_intervals) {
        const Panel worst = panels.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // no further resolution available
        panels.pop();
        const Panel left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }
    // Re-sum to shed the drift of incremental updates.
    value = 0.0;
    error = 0.0;
    while (!panels.empty()) {
        value += panels.top().value;
        error += panels.top().error;
        panels.pop();
    }
    return {value, error, evaluations};
}

namespace {

constexpr double kHead = 1e-12;
constexpr double kTailStart = 40.0;

}  // namespace

QuadratureResult rate_integral(Variant variant, double lo, double hi, double tolerance) {
    if (!(lo > 0.0 && lo <= hi)) throw std::invalid_argument("rate_integral: require 0 < lo <= hi");
    const auto rate = [variant](double z) { return rate_function(z, variant); };
    // Dyadic panels keep the logarithmic growth near 0 resolved.
    std::vector<std::pair<double, double>> pieces;
    double a = lo;
    while (a < hi) {
        const double b = std::min(hi, a < 1.0 ? 2.0 * a : hi);
        pieces.emplace_back(a, b);
        a = b;
    }
    QuadratureResult total;
    const double per_piece = tolerance / static_cast<double>(std::max<std::size_t>(1, pieces.size()));
    for (const auto& [pa, pb] : pieces) {
        const QuadratureResult r = integrate_adaptive(rate, pa, pb, per_piece);
        total.value += r.value;
        total.error_bound += r.error_bound;
        total.evaluations += r.evaluations;
    }
    return total;
}

QuadratureResult lambda_integral(Variant variant, double tolerance) {
    if (!(tolerance >= 1e-12)) throw std::invalid_argument("lambda_integral: tolerance must be >= 1e-12");
    // Head (0, h]: g ~ (1/2) log(1/z), f ~ log(1/z); integrand deviation from the
    // leading term is below 1 there, so h bounds the head error.
    const double weight = variant.rate() == RateKind::G ? 0.5 : 1.0;
    const double head = weight * kHead * (1.0 - std::log(kHead));
    const double head_error = kHead;
    // Tail beyond Z: g ~ e^{-2z}, f ~ e^{-z}; doubled for margin.
    const double tail_error =
        variant.rate() == RateKind::G ? 2.0 * 0.5 * std::exp(-2.0 * kTailStart) : 2.0 * std::exp(-kTailStart);
    const double budget = tolerance - head_error - tail_error;
    QuadratureResult body = rate_integral(variant, kHead, kTailStart, budget);
    body.value += head;
    body.error_bound += head_error + tail_error;
    return body;
}

double log_no_double_gap_exact(std::int64_t n, double u, GapMode mode) {
    if (n < 0) throw std::invalid_argument("no_double_gap_exact: n must be >= 0");
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("no_double_gap_exact: probability must lie in [0,1]");
    if (mode == GapMode::SingleGap) {
        if (n == 0) return 0.0;
        if (u == 1.0) return -std::numeric_limits<double>::infinity();
        return static_cast<double>(n) * std::log1p(-u);
    }
    if (n <= 1) return 0.0;
    if (u == 1.0) return -std::numeric_limits<double>::infinity();
    // N_k = (1-u) N_{k-1} + u(1-u) N_{k-2}, N_0 = N_1 = 1, carried as the ratio
    // deficit d_k = 1 - N_k/N_{k-1}, with d_1 = 0 and d_k = u(u - d_{k-1})/(1 - d_{k-1}).
    double d = 0.0;
    double log_n = 0.0;
    for (std::int64_t k = 2; k <= n; ++k) {
        d = u * (u - d) / (1.0 - d);
        log_n += std::log1p(-d);
    }
    return log_n;
}

double no_double_gap_exact(std::int64_t n, double u, GapMode mode) {
    return std::exp(log_no_double_gap_exact(n, u, mode));
}

double log_double_gap_bound(std::int64_t a, std::int64_t b, double q, Variant variant) {
    if (a < 1 || b < 1 || !(q > 0.0)) throw std::invalid_argument("double_gap_bound: require a,b >= 1 and q > 0");
    const double z = static_cast<double>(b) * q;
    if (variant.rate() == RateKind::G) return -static_cast<double>(a - 1) * rate_g(z);
    return -static_cast<double>(a) * rate_f(z);
}

double double_gap_bound(std::int64_t a, std::int64_t b, double q, Variant variant) {
    return std::exp(log_double_gap_bound(a, b, q, variant));
}

double log_border_bound(std::int64_t a, std::int64_t b, std::int64_t s, std::int64_t t, double q, Variant variant) {
    if (a < 1 || b < 1 || s < 0 || t < 0 || !(q > 0.0))
        throw std::invalid_argument("border_bound: require a,b >= 1, s,t >= 0, q > 0");
    const double hb = rate_function(static_cast<double>(b) * q, variant);
    const double ha = rate_function(static_cast<double>(a) * q, variant);
    double exponent = -static_cast<double>(s) * hb - static_cast<double>(t) * ha + 2.0 * (hb + ha);
    switch (variant.kind()) {
        case VariantKind::Standard:
            exponent += static_cast<double>(s) * static_cast<double>(t) * q * std::exp(2.0 * (hb + ha));
            break;
        case VariantKind::Modified:
            exponent += static_cast<double>(s) * static_cast<double>(t) * q * std::exp(hb + ha);
            break;
        case VariantKind::Frobose:
            break;
    }
    return exponent;
}

double border_bound(std::int64_t a, std::int64_t b, std::int64_t s, std::int64_t t, double q, Variant variant) {
    return std::exp(log_border_bound(a, b, s, t, q, variant));
}

MonotonePath::MonotonePath(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw std::invalid_argument("MonotonePath: at least one vertex required");
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const auto [x, y] = vertices_[i];
        if (!(x > 0.0 && y > 0.0)) throw std::invalid_argument("MonotonePath: vertices must lie in (0,inf)^2");
        if (i > 0 && (x < vertices_[i - 1].first || y < vertices_[i - 1].second))
            throw std::invalid_argument("MonotonePath: coordinates must be non-decreasing");
    }
}

double path_weight(const MonotonePath& path, Variant variant, double tolerance) {
    const auto& v = path.vertices();
    if (v.size() < 2) return 0.0;
    const double per_segment = tolerance / static_cast<double>(v.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const auto [x0, y0] = v[i];
        const double dx = v[i + 1].first - x0, dy = v[i + 1].second - y0;
        if (dx == 0.0 && dy == 0.0) continue;
        const auto integrand = [&](double t) {
            double r = 0.0;
            if (dx != 0.0) r += rate_function(y0 + t * dy, variant) * dx;
            if (dy != 0.0) r += rate_function(x0 + t * dx, variant) * dy;
            return r;
        };
        total += integrate_adaptive(integrand, 0.0, 1.0, per_segment).value;
    }
    return total;
}

Envelope envelope(double p, double c_lower, double c_upper, Variant variant) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("envelope: require 0 < p < 1");
    if (!(c_lower >= 0.0 && c_upper >= 0.0)) throw std::invalid_argument("envelope: constants must be >= 0");
    const double lambda = variant.lambda();
    const double power = variant.kind() == VariantKind::Frobose ? 2.0 : 3.0;
    const double sp = std::sqrt(p);
    const double lower = std::exp((-2.0 * lambda + c_lower * sp) / p);
    const double upper = std::exp((-2.0 * lambda + c_upper * sp * std::pow(std::log(1.0 / p), power)) / p);
    return {lower, upper};
}

double q_of(double p) {
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("q: require 0 <= p < 1");
    return -std::log1p(-p);
}

std::int64_t scale_A(double q) { return static_cast<std::int64_t>(std::ceil(1.0 / std::sqrt(q))); }

std::int64_t scale_B(double q) { return static_cast<std::int64_t>(std::floor(std::log(1.0 / q) / q)); }

ScaleConstants scale_constants(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("scale_constants: require 0 < p < 1");
    ScaleConstants sc;
    sc.p = p;
    sc.q = q_of(p);
    sc.A = scale_A(sc.q);
    sc.B = scale_B(sc.q);
    sc.in_regime = p < 0.1;
    if (!sc.in_regime) sc.warning = "p >= 0.1: outside the small-p regime where A, B are meaningful";
    if (p < 0.06 && !(sc.A >= 2 && sc.B > 2 * sc.A))
        throw std::logic_error("scale_constants: expected A >= 2 and B > 2A for p < 0.06");
    return sc;
}

}  // namespace lbp
